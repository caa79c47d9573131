#include "armplan/bench.hpp"
#include "armplan/mannequin.hpp"
#include "armplan/scene_io.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace armplan;

int main(int argc, char** argv) {
    CLI::App app{"Motion planner benchmark harness"};
    app.require_subcommand(0, 1);

    std::string summarize_csv;
    auto* sum_cmd = app.add_subcommand("summarize", "Print a per-algorithm summary table");
    sum_cmd->add_option("csv", summarize_csv, "records CSV produced by a bench run")->required();

    std::string scene_path, queries_path, out_path = "records.csv";
    std::string robot_path = "data/ur5.json";
    std::string script_path;
    std::string algorithms_arg = "rrt,rrtconnect,bitrrt,prm";
    int runs = 5;
    uint64_t seed = 0;
    double timeout = 5.0;
    int prm_samples = 150;
    double prm_radius = 2.5;
    app.add_option("--scene", scene_path, "scene JSON");
    app.add_option("--queries", queries_path, "query set JSON");
    app.add_option("--algorithms", algorithms_arg, "comma-separated algorithm names");
    app.add_option("--runs", runs, "runs per (algorithm, query)")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed, "seed base; run r uses seed+r");
    app.add_option("--timeout", timeout, "planning timeout [s]");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--robot", robot_path, "robot description JSON");
    app.add_option("--script", script_path,
                   "mannequin motion script CSV; pose at t=0 is added to the scene");
    app.add_option("--prm-samples", prm_samples, "PRM roadmap size");
    app.add_option("--prm-radius", prm_radius, "PRM connection radius [rad]");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sum_cmd) {
            const auto records = read_bench_csv(summarize_csv);
            std::cout << format_summary_table(summarize(records));
            return 0;
        }
        if (scene_path.empty() || queries_path.empty()) {
            std::cerr << "error: --scene and --queries are required\n";
            return 1;
        }

        BenchSpec spec;
        for (const auto& name : CLI::detail::split(algorithms_arg, ',')) {
            const auto alg = algorithm_from_name(name);
            if (!alg) {
                std::cerr << "error: unknown algorithm '" << name << "'\n";
                return 1;
            }
            spec.algorithms.push_back(*alg);
        }

        auto desc = load_robot_description(robot_path);
        auto bodies = load_scene(scene_path);
        if (!script_path.empty()) {
            const MotionScript script = load_motion_script(script_path);
            const MannequinModel man = seated_mannequin();
            for (auto& b : bodies_at(man, config_at(script, 0.0)))
                bodies.push_back(b);
        }

        spec.queries = load_queries(queries_path);
        spec.runs = runs;
        spec.seed_base = seed;
        spec.planner.timeout = timeout;
        spec.planner.prm.num_samples = prm_samples;
        spec.planner.prm.connection_radius = prm_radius;
        spec.world = {&desc.model, &desc.cmodel, kDefaultValidityResolution};
        spec.snapshot = std::make_shared<SceneSnapshot>(1, std::move(bodies));

        const auto records = run_benchmark(spec);
        write_bench_csv(out_path, records);

        size_t ok = 0;
        for (const auto& r : records) ok += r.success;
        std::cout << records.size() << " records (" << ok << " successes) -> " << out_path
                  << "\n\n"
                  << format_summary_table(summarize(records));
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
