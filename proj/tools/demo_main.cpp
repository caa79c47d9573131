#include "armplan/bench.hpp"
#include "armplan/mannequin.hpp"
#include "armplan/scene_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace armplan;

namespace {

std::vector<std::string> load_goal_stream(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    std::vector<std::string> goals;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (!line.empty())
            goals.push_back(line);
    }
    return goals;
}

int run_scheme1(const std::string& robot_path, const std::string& scene_path,
                const std::string& safe_path, const std::string& goals_path,
                const std::string& cache_path, const std::string& log_path) {
    auto desc = load_robot_description(robot_path);
    auto bodies = load_scene(scene_path);
    bodies.push_back(workspace_sphere_body(seated_mannequin()));
    auto snapshot = std::make_shared<SceneSnapshot>(1, std::move(bodies));
    ArmWorld world{&desc.model, &desc.cmodel, kDefaultValidityResolution};
    ConfigSpace space = make_config_space(world, snapshot);

    PlanCache cache;
    if (std::filesystem::exists(cache_path)) {
        cache = load_plan_cache(cache_path);
        std::cout << "loaded cache: " << cache.entries.size() << " entries\n";
    } else {
        const auto safe = load_named_configs(safe_path);
        PlannerConfig cfg;
        const auto built = build_cache(space, safe, cfg, Algorithm::BiTrrt);
        if (!built.success) {
            std::cerr << "cache build failed for " << built.failed_pairs.size() << " pairs\n";
            return 2;
        }
        cache = built.cache;
        save_plan_cache(cache_path, cache);
        std::cout << "built cache: " << cache.entries.size() << " entries -> " << cache_path
                  << "\n";
    }

    const auto goals = load_goal_stream(goals_path);
    const long plans_before = plan_invocation_count();
    SimClock clock;
    const ExecutionLog log = serve_cached_goals(cache, goals, desc.model.velocity_limits(),
                                                desc.model.acceleration_limits(), clock);
    const long serve_plans = plan_invocation_count() - plans_before;
    write_execution_log_csv(log_path, log);
    std::cout << "served " << goals.size() << " goals in " << clock.t
              << " s simulated, planner calls during serving: " << serve_plans << ", log -> "
              << log_path << "\n";
    return log.count(ExecAction::Error) > 0 ? 2 : 0;
}

int run_scheme2(const std::string& robot_path, const std::string& scene_path,
                const std::string& script_path, const std::string& query_path,
                const std::string& log_path) {
    auto desc = load_robot_description(robot_path);
    const auto env = load_scene(scene_path);
    const MotionScript script = load_motion_script(script_path);
    const MannequinModel man = seated_mannequin();

    const auto queries = load_queries(query_path);
    if (queries.empty())
        throw std::runtime_error("no query in " + query_path);
    const NamedQuery& q = queries.front();

    auto bodies_now = [&](double t) {
        auto bodies = env;
        for (auto& b : bodies_at(man, config_at(script, t)))
            bodies.push_back(b);
        return bodies;
    };

    SceneMonitor monitor(bodies_now(0.0), 0.0);
    SimClock clock;
    SuperviseParams params;
    ArmWorld world{&desc.model, &desc.cmodel, kDefaultValidityResolution};
    const SuperviseResult res =
        supervise_inside(world, {q.q_init, q.q_goal}, params, monitor, clock,
                         [&](double t) { monitor.publish(bodies_now(t), t); });
    write_execution_log_csv(log_path, res.log);
    std::cout << q.name << ": " << (res.reached ? "reached" : "aborted") << " after "
              << res.replans << " replans, " << clock.t << " s simulated, log -> " << log_path
              << "\n";
    return res.reached ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mobility scheme demos"};
    app.require_subcommand(1);

    std::string robot_path = "data/ur5.json";
    app.add_option("--robot", robot_path, "robot description JSON");

    auto* s1 = app.add_subcommand("scheme1", "Offline plan cache between safe positions");
    std::string scene1, safe_path, goals_path, cache_path, log1 = "scheme1_log.csv";
    s1->add_option("--scene", scene1, "scene JSON")->required();
    s1->add_option("--safe", safe_path, "named safe positions JSON")->required();
    s1->add_option("--goals", goals_path, "goal stream, one position id per line")->required();
    s1->add_option("--cache", cache_path, "plan cache JSON; built and saved if missing")
        ->required();
    s1->add_option("--log", log1, "execution log CSV");

    auto* s2 = app.add_subcommand("scheme2", "Stop-and-replan near the moving mannequin");
    std::string scene2, script_path, query_path, log2 = "scheme2_log.csv";
    s2->add_option("--scene", scene2, "scene JSON")->required();
    s2->add_option("--script", script_path, "mannequin motion script CSV")->required();
    s2->add_option("--query", query_path, "query JSON (first entry is run)")->required();
    s2->add_option("--log", log2, "execution log CSV");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*s1)
            return run_scheme1(robot_path, scene1, safe_path, goals_path, cache_path, log1);
        return run_scheme2(robot_path, scene2, script_path, query_path, log2);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
