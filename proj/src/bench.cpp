#include "armplan/bench.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace armplan {

std::vector<BenchRecord> run_benchmark(const BenchSpec& spec) {
    std::vector<BenchRecord> records;
    const ConfigSpace space = make_config_space(spec.world, spec.snapshot);
    const Eigen::VectorXd v_max = spec.world.model->velocity_limits();
    const Eigen::VectorXd a_max = spec.world.model->acceleration_limits();

    for (int run = 0; run < spec.runs; ++run) {
        for (const auto& query : spec.queries) {
            for (const Algorithm alg : spec.algorithms) {
                PlannerConfig cfg = spec.planner;
                cfg.rng_seed = spec.seed_base + static_cast<uint64_t>(run);
                const PlanOutcome out = plan(alg, space, {query.q_init, query.q_goal}, cfg);

                BenchRecord rec;
                rec.algorithm = algorithm_name(alg);
                rec.query = query.name;
                rec.run = run;
                if (out.ok()) {
                    // Revalidate before logging; a plan that fails the audit is
                    // recorded as a failure.
                    bool valid = true;
                    const auto& vias = out.path.via_points;
                    for (size_t i = 1; i < vias.size() && valid; ++i)
                        valid = space.motion(vias[i - 1], vias[i]);
                    if (valid) {
                        rec.success = true;
                        rec.plan_time = out.path.stats.plan_time;
                        rec.simplify_time = out.path.stats.simplify_time;
                        rec.via_point_count = vias.size();
                        rec.execution_time =
                            time_parameterize(vias, v_max, a_max, 1.0).total_duration;
                    }
                }
                records.push_back(std::move(rec));
            }
        }
    }
    return records;
}

std::vector<AlgorithmSummary> summarize(const std::vector<BenchRecord>& records) {
    std::vector<AlgorithmSummary> out;
    auto row_for = [&](const std::string& name) -> AlgorithmSummary& {
        for (auto& s : out)
            if (s.algorithm == name)
                return s;
        out.push_back({});
        out.back().algorithm = name;
        return out.back();
    };

    struct Acc {
        double plan = 0, simplify = 0, vias = 0, exec = 0;
    };
    std::map<std::string, Acc> acc;
    for (const auto& r : records) {
        AlgorithmSummary& s = row_for(r.algorithm);
        ++s.runs;
        if (r.success) {
            ++s.successes;
            auto& a = acc[r.algorithm];
            a.plan += r.plan_time;
            a.simplify += r.simplify_time;
            a.vias += static_cast<double>(r.via_point_count);
            a.exec += r.execution_time;
        }
    }
    for (auto& s : out) {
        s.success_rate = s.runs ? static_cast<double>(s.successes) / s.runs : 0.0;
        if (s.successes) {
            const auto& a = acc[s.algorithm];
            const double n = static_cast<double>(s.successes);
            s.mean_plan_time = a.plan / n;
            s.mean_simplify_time = a.simplify / n;
            s.mean_total_time = (a.plan + a.simplify) / n;
            s.mean_via_points = a.vias / n;
            s.mean_execution_time = a.exec / n;
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        const double ta = a.mean_total_time.value_or(std::numeric_limits<double>::infinity());
        const double tb = b.mean_total_time.value_or(std::numeric_limits<double>::infinity());
        return ta < tb;
    });
    return out;
}

void write_bench_csv(const std::string& path, const std::vector<BenchRecord>& records) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out.precision(17);
    out << "algorithm,query,run,success,plan_time,simplify_time,via_points,execution_time\n";
    for (const auto& r : records)
        out << r.algorithm << "," << r.query << "," << r.run << "," << (r.success ? 1 : 0) << ","
            << r.plan_time << "," << r.simplify_time << "," << r.via_point_count << ","
            << r.execution_time << "\n";
}

std::vector<BenchRecord> read_bench_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::vector<BenchRecord> records;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != 8)
            throw std::runtime_error("bench csv: expected 8 columns");
        BenchRecord r;
        r.algorithm = cells[0];
        r.query = cells[1];
        r.run = std::stoi(cells[2]);
        r.success = cells[3] == "1";
        r.plan_time = std::stod(cells[4]);
        r.simplify_time = std::stod(cells[5]);
        r.via_point_count = static_cast<size_t>(std::stoul(cells[6]));
        r.execution_time = std::stod(cells[7]);
        records.push_back(std::move(r));
    }
    return records;
}

std::string format_summary_table(const std::vector<AlgorithmSummary>& summaries) {
    std::ostringstream os;
    os << std::left << std::setw(12) << "algorithm" << std::right << std::setw(10) << "success"
       << std::setw(14) << "plan[s]" << std::setw(14) << "simplify[s]" << std::setw(14)
       << "total[s]" << std::setw(12) << "via_pts" << std::setw(12) << "exec[s]" << "\n";
    auto cell = [](const std::optional<double>& v) {
        if (!v)
            return std::string("-");
        std::ostringstream c;
        c << std::fixed << std::setprecision(4) << *v;
        return c.str();
    };
    for (const auto& s : summaries) {
        std::ostringstream rate;
        rate << s.successes << "/" << s.runs;
        os << std::left << std::setw(12) << s.algorithm << std::right << std::setw(10)
           << rate.str() << std::setw(14) << cell(s.mean_plan_time) << std::setw(14)
           << cell(s.mean_simplify_time) << std::setw(14) << cell(s.mean_total_time)
           << std::setw(12) << cell(s.mean_via_points) << std::setw(12)
           << cell(s.mean_execution_time) << "\n";
    }
    return os.str();
}

}  // namespace armplan
