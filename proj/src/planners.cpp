#include "armplan/planners.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>

namespace armplan {

namespace {

std::atomic<long> g_plan_invocations{0};

using Clock = std::chrono::steady_clock;

struct Deadline {
    Clock::time_point start = Clock::now();
    double timeout = 5.0;
    const std::atomic<bool>* cancel = nullptr;

    bool expired() const {
        if (cancel && cancel->load(std::memory_order_relaxed))
            return true;
        return std::chrono::duration<double>(Clock::now() - start).count() > timeout;
    }
    double elapsed() const {
        return std::chrono::duration<double>(Clock::now() - start).count();
    }
};

struct TreeNode {
    JointConfig q;
    int parent = -1;
    double cost = 0.0;
};

using Tree = std::vector<TreeNode>;

int nearest(const Tree& tree, const JointConfig& q) {
    int best = 0;
    double best_d = ConfigSpace::distance(tree[0].q, q);
    for (size_t i = 1; i < tree.size(); ++i) {
        const double d = ConfigSpace::distance(tree[i].q, q);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    return best;
}

std::vector<JointConfig> trace_to_root(const Tree& tree, int idx) {
    std::vector<JointConfig> out;
    for (int i = idx; i >= 0; i = tree[i].parent)
        out.push_back(tree[i].q);
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace

long plan_invocation_count() {
    return g_plan_invocations.load();
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
    if (name == "rrt") return Algorithm::Rrt;
    if (name == "rrtconnect") return Algorithm::RrtConnect;
    if (name == "bitrrt") return Algorithm::BiTrrt;
    if (name == "prm") return Algorithm::Prm;
    return std::nullopt;
}

std::string algorithm_name(Algorithm alg) {
    switch (alg) {
        case Algorithm::Rrt: return "rrt";
        case Algorithm::RrtConnect: return "rrtconnect";
        case Algorithm::BiTrrt: return "bitrrt";
        case Algorithm::Prm: return "prm";
    }
    return "?";
}

JointConfig sample_uniform(const ConfigSpace& space, Rng& rng) {
    JointConfig q(space.dimension());
    for (int i = 0; i < space.dimension(); ++i)
        q[i] = rng.uniform(space.lower[i], space.upper[i]);
    return q;
}

JointConfig steer(const JointConfig& q_from, const JointConfig& q_to, double step) {
    const double d = ConfigSpace::distance(q_from, q_to);
    if (d <= step)
        return q_to;
    return q_from + (step / d) * (q_to - q_from);
}

bool bitrrt_transition_test(double cost_parent, double cost_child, double& temperature,
                            const BiTrrtParams& params, Rng& rng) {
    if (cost_child <= cost_parent)
        return true;
    const double p = std::exp(-(cost_child - cost_parent) / temperature);
    if (rng.uniform01() < p) {
        temperature /= params.temp_change_factor;
        return true;
    }
    temperature *= params.temp_change_factor;
    return false;
}

double path_length(const std::vector<JointConfig>& path) {
    double len = 0.0;
    for (size_t i = 1; i < path.size(); ++i)
        len += ConfigSpace::distance(path[i - 1], path[i]);
    return len;
}

std::vector<JointConfig> shortcut(const std::vector<JointConfig>& path, const ConfigSpace& space,
                                  int max_attempts, Rng& rng) {
    std::vector<JointConfig> out = path;
    for (int attempt = 0; attempt < max_attempts && out.size() > 2; ++attempt) {
        size_t i = rng.index(out.size());
        size_t j = rng.index(out.size());
        if (i > j)
            std::swap(i, j);
        if (j - i < 2)
            continue;
        if (space.motion(out[i], out[j]))
            out.erase(out.begin() + i + 1, out.begin() + j);
    }
    return out;
}

namespace {

// ---------------------------------------------------------------- RRT

std::optional<std::vector<JointConfig>> rrt_plan(const ConfigSpace& space, const PlanQuery& query,
                                                 const PlannerConfig& cfg, Rng& rng,
                                                 const Deadline& deadline, PathStats& stats) {
    Tree tree;
    tree.push_back({query.q_init, -1, 0.0});
    for (long it = 0; it < cfg.max_iterations; ++it) {
        if (deadline.expired())
            break;
        stats.iterations = it + 1;
        const JointConfig target =
            rng.uniform01() < cfg.goal_bias ? query.q_goal : sample_uniform(space, rng);
        const int near = nearest(tree, target);
        const JointConfig q_new = steer(tree[near].q, target, cfg.step_size);
        if (!space.motion(tree[near].q, q_new))
            continue;
        tree.push_back({q_new, near, 0.0});
        const int new_idx = static_cast<int>(tree.size()) - 1;
        if (ConfigSpace::distance(q_new, query.q_goal) <= cfg.step_size &&
            space.motion(q_new, query.q_goal)) {
            tree.push_back({query.q_goal, new_idx, 0.0});
            stats.tree_or_graph_size = tree.size();
            return trace_to_root(tree, static_cast<int>(tree.size()) - 1);
        }
    }
    stats.tree_or_graph_size = tree.size();
    return std::nullopt;
}

// ---------------------------------------------------------- RRT-Connect

enum class ExtendResult { Trapped, Advanced, Reached };

ExtendResult extend(Tree& tree, const ConfigSpace& space, const JointConfig& target, double step) {
    const int near = nearest(tree, target);
    const JointConfig q_new = steer(tree[near].q, target, step);
    if (!space.motion(tree[near].q, q_new))
        return ExtendResult::Trapped;
    tree.push_back({q_new, near, 0.0});
    return ConfigSpace::distance(q_new, target) <= 1e-12 ? ExtendResult::Reached
                                                         : ExtendResult::Advanced;
}

std::vector<JointConfig> join_trees(const Tree& start_tree, int start_idx, const Tree& goal_tree,
                                    int goal_idx) {
    std::vector<JointConfig> path = trace_to_root(start_tree, start_idx);
    std::vector<JointConfig> tail = trace_to_root(goal_tree, goal_idx);
    // tail runs goal -> junction; append it reversed, skipping the junction
    // node the two trees share.
    for (auto it = tail.rbegin(); it != tail.rend(); ++it)
        if (ConfigSpace::distance(path.back(), *it) > 0.0)
            path.push_back(*it);
    return path;
}

std::optional<std::vector<JointConfig>> rrt_connect_plan(const ConfigSpace& space,
                                                         const PlanQuery& query,
                                                         const PlannerConfig& cfg, Rng& rng,
                                                         const Deadline& deadline,
                                                         PathStats& stats) {
    if (!space.valid(query.q_goal))
        return std::nullopt;
    Tree tree_a, tree_b;
    tree_a.push_back({query.q_init, -1, 0.0});
    tree_b.push_back({query.q_goal, -1, 0.0});
    bool a_is_start = true;

    for (long it = 0; it < cfg.max_iterations; ++it) {
        if (deadline.expired())
            break;
        stats.iterations = it + 1;
        const JointConfig sample = sample_uniform(space, rng);
        if (extend(tree_a, space, sample, cfg.step_size) != ExtendResult::Trapped) {
            const JointConfig& q_new = tree_a.back().q;
            ExtendResult res;
            do {
                res = extend(tree_b, space, q_new, cfg.step_size);
            } while (res == ExtendResult::Advanced && !deadline.expired());
            if (res == ExtendResult::Reached) {
                stats.tree_or_graph_size = tree_a.size() + tree_b.size();
                const int ia = static_cast<int>(tree_a.size()) - 1;
                const int ib = static_cast<int>(tree_b.size()) - 1;
                return a_is_start ? join_trees(tree_a, ia, tree_b, ib)
                                  : join_trees(tree_b, ib, tree_a, ia);
            }
        }
        std::swap(tree_a, tree_b);
        a_is_start = !a_is_start;
    }
    stats.tree_or_graph_size = tree_a.size() + tree_b.size();
    return std::nullopt;
}

// --------------------------------------------------------------- BiTRRT

struct BiTrrtState {
    double temperature;
    long frontier_count = 1;
    long nonfrontier_count = 0;
    std::function<double(const JointConfig&)> cost;
};

ExtendResult bitrrt_extend(Tree& tree, const ConfigSpace& space, const JointConfig& target,
                           const PlannerConfig& cfg, BiTrrtState& st, Rng& rng) {
    const int near = nearest(tree, target);
    const double dist = ConfigSpace::distance(tree[near].q, target);
    const bool frontier = dist > cfg.step_size;
    if (!frontier && st.frontier_count > 0 &&
        static_cast<double>(st.nonfrontier_count) / st.frontier_count >
            cfg.bitrrt.frontier_ratio)
        return ExtendResult::Trapped;  // refinement control

    const JointConfig q_new = steer(tree[near].q, target, cfg.step_size);
    const double cost_new = st.cost(q_new);
    if (cost_new > cfg.bitrrt.cost_threshold)
        return ExtendResult::Trapped;
    if (!bitrrt_transition_test(tree[near].cost, cost_new, st.temperature, cfg.bitrrt, rng))
        return ExtendResult::Trapped;
    if (!space.motion(tree[near].q, q_new))
        return ExtendResult::Trapped;

    tree.push_back({q_new, near, cost_new});
    if (frontier)
        ++st.frontier_count;
    else
        ++st.nonfrontier_count;
    return dist <= cfg.step_size ? ExtendResult::Reached : ExtendResult::Advanced;
}

std::optional<std::vector<JointConfig>> bitrrt_plan(const ConfigSpace& space,
                                                    const PlanQuery& query,
                                                    const PlannerConfig& cfg, Rng& rng,
                                                    const Deadline& deadline, PathStats& stats) {
    if (!space.valid(query.q_goal))
        return std::nullopt;

    BiTrrtState st;
    st.temperature = cfg.bitrrt.temp_init;
    st.cost = space.clearance
                  ? std::function<double(const JointConfig&)>(
                        [&space](const JointConfig& q) { return 1.0 / (space.clearance(q) + 0.05); })
                  : [](const JointConfig&) { return 1.0; };

    Tree tree_a, tree_b;
    tree_a.push_back({query.q_init, -1, st.cost(query.q_init)});
    tree_b.push_back({query.q_goal, -1, st.cost(query.q_goal)});
    bool a_is_start = true;

    for (long it = 0; it < cfg.max_iterations; ++it) {
        if (deadline.expired())
            break;
        stats.iterations = it + 1;
        const JointConfig sample = sample_uniform(space, rng);
        if (bitrrt_extend(tree_a, space, sample, cfg, st, rng) != ExtendResult::Trapped) {
            const JointConfig q_new = tree_a.back().q;
            ExtendResult res;
            do {
                res = bitrrt_extend(tree_b, space, q_new, cfg, st, rng);
            } while (res == ExtendResult::Advanced && !deadline.expired());
            if (res == ExtendResult::Reached) {
                stats.tree_or_graph_size = tree_a.size() + tree_b.size();
                const int ia = static_cast<int>(tree_a.size()) - 1;
                const int ib = static_cast<int>(tree_b.size()) - 1;
                return a_is_start ? join_trees(tree_a, ia, tree_b, ib)
                                  : join_trees(tree_b, ib, tree_a, ia);
            }
        }
        std::swap(tree_a, tree_b);
        a_is_start = !a_is_start;
    }
    stats.tree_or_graph_size = tree_a.size() + tree_b.size();
    return std::nullopt;
}

}  // namespace

// ------------------------------------------------------------------ PRM

Roadmap build_roadmap(const ConfigSpace& space, const PrmParams& params, Rng& rng,
                      long max_sample_attempts) {
    Roadmap map;
    for (long attempt = 0;
         attempt < max_sample_attempts && static_cast<int>(map.nodes.size()) < params.num_samples;
         ++attempt) {
        const JointConfig q = sample_uniform(space, rng);
        if (space.valid(q))
            map.nodes.push_back(q);
    }
    map.adjacency.assign(map.nodes.size(), {});
    for (size_t i = 0; i < map.nodes.size(); ++i) {
        // Candidate neighbors within the connection radius, nearest first.
        std::vector<std::pair<double, size_t>> cands;
        for (size_t j = 0; j < i; ++j) {
            const double d = ConfigSpace::distance(map.nodes[i], map.nodes[j]);
            if (d <= params.connection_radius)
                cands.emplace_back(d, j);
        }
        std::sort(cands.begin(), cands.end());
        int connected = 0;
        for (const auto& [d, j] : cands) {
            if (connected >= params.max_neighbors)
                break;
            if (space.motion(map.nodes[i], map.nodes[j])) {
                map.adjacency[i].emplace_back(static_cast<int>(j), d);
                map.adjacency[j].emplace_back(static_cast<int>(i), d);
                ++connected;
            }
        }
    }
    return map;
}

namespace {

// A* over the roadmap plus the two query configurations.
std::optional<std::vector<int>> astar(const Roadmap& map, const std::vector<int>& starts,
                                      const std::vector<double>& start_costs,
                                      const std::vector<int>& goals,
                                      const std::vector<double>& goal_costs,
                                      const JointConfig& q_goal) {
    const size_t n = map.nodes.size();
    std::vector<double> g(n, std::numeric_limits<double>::infinity());
    std::vector<int> parent(n, -1);
    std::vector<double> goal_link(n, std::numeric_limits<double>::infinity());
    for (size_t k = 0; k < goals.size(); ++k)
        goal_link[goals[k]] = goal_costs[k];

    using Entry = std::pair<double, int>;  // (f, node)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    for (size_t k = 0; k < starts.size(); ++k) {
        g[starts[k]] = start_costs[k];
        open.emplace(start_costs[k] + ConfigSpace::distance(map.nodes[starts[k]], q_goal),
                     starts[k]);
    }

    // Track the best complete route (node adjacent to the goal).
    double best_total = std::numeric_limits<double>::infinity();
    int best_exit = -1;
    while (!open.empty()) {
        const auto [f, u] = open.top();
        open.pop();
        if (f > best_total)
            break;
        if (f > g[u] + ConfigSpace::distance(map.nodes[u], q_goal) + 1e-12)
            continue;  // stale entry
        if (g[u] + goal_link[u] < best_total) {
            best_total = g[u] + goal_link[u];
            best_exit = u;
        }
        for (const auto& [v, w] : map.adjacency[u]) {
            if (g[u] + w < g[v]) {
                g[v] = g[u] + w;
                parent[v] = u;
                open.emplace(g[v] + ConfigSpace::distance(map.nodes[v], q_goal), v);
            }
        }
    }
    if (best_exit < 0)
        return std::nullopt;
    std::vector<int> path;
    for (int u = best_exit; u >= 0; u = parent[u])
        path.push_back(u);
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

std::optional<std::vector<JointConfig>> prm_query(const Roadmap& roadmap, const ConfigSpace& space,
                                                  const JointConfig& q_init,
                                                  const JointConfig& q_goal) {
    if (roadmap.nodes.empty())
        return std::nullopt;

    // Visible roadmap nodes for a query configuration, nearest first,
    // capped to keep the number of expensive motion checks bounded.
    auto visible = [&](const JointConfig& q, std::vector<int>& nodes,
                       std::vector<double>& costs) {
        std::vector<std::pair<double, int>> order;
        order.reserve(roadmap.nodes.size());
        for (size_t i = 0; i < roadmap.nodes.size(); ++i)
            order.emplace_back(ConfigSpace::distance(q, roadmap.nodes[i]), static_cast<int>(i));
        std::sort(order.begin(), order.end());
        constexpr int kMaxChecks = 20;
        int checks = 0;
        for (const auto& [d, i] : order) {
            if (checks++ >= kMaxChecks && !nodes.empty())
                break;
            if (space.motion(q, roadmap.nodes[i])) {
                nodes.push_back(i);
                costs.push_back(d);
                if (nodes.size() >= 10)
                    break;
            }
        }
    };

    std::vector<int> starts, goals;
    std::vector<double> start_costs, goal_costs;
    visible(q_init, starts, start_costs);
    visible(q_goal, goals, goal_costs);
    if (starts.empty() || goals.empty())
        return std::nullopt;

    const auto node_path = astar(roadmap, starts, start_costs, goals, goal_costs, q_goal);
    if (!node_path)
        return std::nullopt;

    std::vector<JointConfig> path;
    path.push_back(q_init);
    for (int idx : *node_path)
        path.push_back(roadmap.nodes[idx]);
    path.push_back(q_goal);
    return path;
}

namespace {

std::optional<std::vector<JointConfig>> prm_plan(const ConfigSpace& space, const PlanQuery& query,
                                                 const PlannerConfig& cfg, Rng& rng,
                                                 const Deadline& deadline, PathStats& stats) {
    if (!space.valid(query.q_goal))
        return std::nullopt;
    const Roadmap map = build_roadmap(space, cfg.prm, rng);
    stats.tree_or_graph_size = map.nodes.size();
    stats.iterations = static_cast<long>(map.nodes.size());
    if (deadline.expired())
        return std::nullopt;
    return prm_query(map, space, query.q_init, query.q_goal);
}

}  // namespace

PlanOutcome plan(Algorithm algorithm, const ConfigSpace& space, const PlanQuery& query,
                 const PlannerConfig& cfg, const std::atomic<bool>* cancel) {
    g_plan_invocations.fetch_add(1);
    PlanOutcome out;

    if (query.q_init.size() != space.dimension() || query.q_goal.size() != space.dimension()) {
        out.status = PlanStatus::InvalidQuery;
        out.message = "query dimension mismatch";
        return out;
    }
    if (!space.in_bounds(query.q_init) || !space.valid(query.q_init)) {
        out.status = PlanStatus::InvalidQuery;
        out.message = "q_init is not a valid configuration";
        return out;
    }
    if (!space.in_bounds(query.q_goal)) {
        out.status = PlanStatus::InvalidQuery;
        out.message = "q_goal outside bounds";
        return out;
    }

    Deadline deadline;
    deadline.timeout = cfg.timeout;
    deadline.cancel = cancel;
    Rng rng(cfg.rng_seed);

    if (ConfigSpace::distance(query.q_init, query.q_goal) <= 0.0) {
        out.status = PlanStatus::Success;
        out.path.via_points = {query.q_init};
        out.path.stats.via_point_count = 1;
        return out;
    }

    std::optional<std::vector<JointConfig>> raw;
    switch (algorithm) {
        case Algorithm::Rrt:
            raw = rrt_plan(space, query, cfg, rng, deadline, out.path.stats);
            break;
        case Algorithm::RrtConnect:
            raw = rrt_connect_plan(space, query, cfg, rng, deadline, out.path.stats);
            break;
        case Algorithm::BiTrrt:
            raw = bitrrt_plan(space, query, cfg, rng, deadline, out.path.stats);
            break;
        case Algorithm::Prm:
            raw = prm_plan(space, query, cfg, rng, deadline, out.path.stats);
            break;
    }
    out.path.stats.plan_time = deadline.elapsed();

    if (!raw) {
        out.status = PlanStatus::Failure;
        out.message = "no path found within iteration/time budget";
        return out;
    }

    const auto simplify_start = Clock::now();
    out.path.via_points = shortcut(*raw, space, cfg.shortcut_attempts, rng);
    out.path.stats.simplify_time =
        std::chrono::duration<double>(Clock::now() - simplify_start).count();
    out.path.via_points.front() = query.q_init;
    out.path.via_points.back() = query.q_goal;
    out.path.stats.via_point_count = out.path.via_points.size();
    out.status = PlanStatus::Success;
    return out;
}

}  // namespace armplan
