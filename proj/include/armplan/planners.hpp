#pragma once

#include "armplan/kinematics.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace armplan {

// Configuration space defined by box bounds plus validity predicates; the
// distance metric is the max-norm over joints.
struct ConfigSpace {
    Eigen::VectorXd lower, upper;
    std::function<bool(const JointConfig&)> valid;
    std::function<bool(const JointConfig&, const JointConfig&)> motion;
    std::function<double(const JointConfig&)> clearance;  // optional

    int dimension() const { return static_cast<int>(lower.size()); }

    bool in_bounds(const JointConfig& q) const {
        for (int i = 0; i < dimension(); ++i)
            if (q[i] < lower[i] || q[i] > upper[i])
                return false;
        return true;
    }

    static double distance(const JointConfig& a, const JointConfig& b) {
        return (a - b).cwiseAbs().maxCoeff();
    }
};

struct PlanQuery {
    JointConfig q_init, q_goal;
};

struct BiTrrtParams {
    double temp_init = 0.1;
    double temp_change_factor = 2.0;
    double cost_threshold = std::numeric_limits<double>::infinity();
    double frontier_ratio = 0.1;
};

struct PrmParams {
    int num_samples = 1000;
    double connection_radius = 0.8;
    int max_neighbors = 10;  // successful connections kept per node
};

struct PlannerConfig {
    double step_size = 0.2;   // [rad], max-norm
    double goal_bias = 0.05;
    long max_iterations = 100000;
    double timeout = 5.0;     // [s]
    uint64_t rng_seed = 0;
    int shortcut_attempts = 200;
    BiTrrtParams bitrrt;
    PrmParams prm;
};

enum class Algorithm { Rrt, RrtConnect, BiTrrt, Prm };

std::optional<Algorithm> algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm alg);

struct PathStats {
    double plan_time = 0.0;      // wall-clock [s]
    double simplify_time = 0.0;  // wall-clock [s]
    long iterations = 0;
    size_t tree_or_graph_size = 0;
    size_t via_point_count = 0;
};

struct PathResult {
    std::vector<JointConfig> via_points;  // first = q_init, last = q_goal, exactly
    PathStats stats;
};

enum class PlanStatus { Success, Failure, InvalidQuery };

struct PlanOutcome {
    PlanStatus status = PlanStatus::Failure;
    PathResult path;
    std::string message;

    bool ok() const { return status == PlanStatus::Success; }
};

// Seedable deterministic generator; uniform doubles are derived from the raw
// 64-bit stream as (x >> 11) * 2^-53 so sequences are stable across standard
// library implementations.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : gen_(seed) {}

    double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    size_t index(size_t n) { return static_cast<size_t>(uniform01() * n) % n; }

private:
    std::mt19937_64 gen_;
};

JointConfig sample_uniform(const ConfigSpace& space, Rng& rng);

// Returns q_to when it is within `step` of q_from (max-norm), otherwise the
// point at distance exactly `step` along the straight segment.
JointConfig steer(const JointConfig& q_from, const JointConfig& q_to, double step);

// Transition test with adaptive temperature: downhill moves always accepted,
// uphill moves accepted with probability exp(-dc/T); T shrinks on uphill
// acceptance and grows on rejection.
bool bitrrt_transition_test(double cost_parent, double cost_child, double& temperature,
                            const BiTrrtParams& params, Rng& rng);

PlanOutcome plan(Algorithm algorithm, const ConfigSpace& space, const PlanQuery& query,
                 const PlannerConfig& cfg, const std::atomic<bool>* cancel = nullptr);

// Randomized shortcutting over via-point pairs; never lengthens the path.
std::vector<JointConfig> shortcut(const std::vector<JointConfig>& path, const ConfigSpace& space,
                                  int max_attempts, Rng& rng);

double path_length(const std::vector<JointConfig>& path);

struct Roadmap {
    std::vector<JointConfig> nodes;
    std::vector<std::vector<std::pair<int, double>>> adjacency;  // (node, edge length)
};

Roadmap build_roadmap(const ConfigSpace& space, const PrmParams& params, Rng& rng,
                      long max_sample_attempts = 100000);

// Connects both query configurations to visible roadmap nodes and searches
// for the shortest path by cumulative joint-space length (A*, straight-line
// heuristic). Empty optional when no connected route exists.
std::optional<std::vector<JointConfig>> prm_query(const Roadmap& roadmap, const ConfigSpace& space,
                                                  const JointConfig& q_init,
                                                  const JointConfig& q_goal);

// Total number of plan() invocations in this process; the cached-plan server
// is audited against it.
long plan_invocation_count();

}  // namespace armplan
