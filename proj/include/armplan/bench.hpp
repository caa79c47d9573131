#pragma once

#include "armplan/executor.hpp"
#include "armplan/scene_io.hpp"

#include <optional>

namespace armplan {

struct BenchSpec {
    std::vector<Algorithm> algorithms;
    std::vector<NamedQuery> queries;
    int runs = 5;
    uint64_t seed_base = 0;
    PlannerConfig planner;
    ArmWorld world;
    std::shared_ptr<const SceneSnapshot> snapshot;
};

struct BenchRecord {
    std::string algorithm;
    std::string query;
    int run = 0;
    bool success = false;
    double plan_time = 0.0;       // wall clock [s]
    double simplify_time = 0.0;   // wall clock [s]
    size_t via_point_count = 0;
    double execution_time = 0.0;  // simulated trajectory duration [s]
};

// Sequential runs x queries x algorithms sweep; every successful plan is
// revalidated against the snapshot before being recorded.
std::vector<BenchRecord> run_benchmark(const BenchSpec& spec);

struct AlgorithmSummary {
    std::string algorithm;
    size_t runs = 0;
    size_t successes = 0;
    double success_rate = 0.0;
    // Means over successful runs; absent when every run failed.
    std::optional<double> mean_plan_time, mean_simplify_time, mean_total_time;
    std::optional<double> mean_via_points, mean_execution_time;
};

// Per-algorithm means over successful runs, ranked by mean total time
// (all-failure algorithms last).
std::vector<AlgorithmSummary> summarize(const std::vector<BenchRecord>& records);

void write_bench_csv(const std::string& path, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_bench_csv(const std::string& path);

std::string format_summary_table(const std::vector<AlgorithmSummary>& summaries);

}  // namespace armplan
