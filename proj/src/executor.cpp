#include "armplan/executor.hpp"

#include <stdexcept>

namespace armplan {

SceneMonitor::SceneMonitor() : snapshot_(std::make_shared<SceneSnapshot>(0, std::vector<CollisionBody>{})) {}

SceneMonitor::SceneMonitor(std::vector<CollisionBody> initial_bodies, double time)
    : snapshot_(std::make_shared<SceneSnapshot>(1, std::move(initial_bodies))) {
    log_.emplace_back(1, time);
}

std::shared_ptr<const SceneSnapshot> SceneMonitor::snapshot() const {
    std::lock_guard lock(mutex_);
    return snapshot_;
}

uint64_t SceneMonitor::publish(std::vector<CollisionBody> bodies, double time) {
    std::lock_guard lock(mutex_);
    const uint64_t version = snapshot_->version() + 1;
    snapshot_ = std::make_shared<SceneSnapshot>(version, std::move(bodies));
    log_.emplace_back(version, time);
    return version;
}

std::vector<std::pair<uint64_t, double>> SceneMonitor::update_log() const {
    std::lock_guard lock(mutex_);
    return log_;
}

const char* exec_action_name(ExecAction a) {
    switch (a) {
        case ExecAction::Advance: return "advance";
        case ExecAction::Stop: return "stop";
        case ExecAction::ReplanStarted: return "replan_started";
        case ExecAction::ReplanDone: return "replan_done";
        case ExecAction::GoalReached: return "goal_reached";
        case ExecAction::GoalUpdated: return "goal_updated";
        case ExecAction::Error: return "error";
    }
    return "?";
}

size_t ExecutionLog::count(ExecAction a) const {
    size_t n = 0;
    for (const auto& e : events)
        if (e.action == a)
            ++n;
    return n;
}

const ExecEvent* ExecutionLog::last(ExecAction a) const {
    for (auto it = events.rbegin(); it != events.rend(); ++it)
        if (it->action == a)
            return &*it;
    return nullptr;
}

ConfigSpace make_config_space(const ArmWorld& world,
                              std::shared_ptr<const SceneSnapshot> snapshot,
                              bool with_clearance) {
    const RobotModel* model = world.model;
    const RobotCollisionModel* cmodel = world.cmodel;
    const double resolution = world.resolution;

    ConfigSpace space;
    space.lower = model->lower_bounds();
    space.upper = model->upper_bounds();
    space.valid = [model, cmodel, snapshot](const JointConfig& q) {
        return !config_collides(*model, *cmodel, q, *snapshot);
    };
    space.motion = [model, cmodel, snapshot, resolution](const JointConfig& a,
                                                         const JointConfig& b) {
        return motion_valid(*model, *cmodel, a, b, *snapshot, resolution);
    };
    if (with_clearance)
        space.clearance = [model, cmodel, snapshot](const JointConfig& q) {
            return min_clearance(*model, *cmodel, q, *snapshot);
        };
    return space;
}

namespace {

uint64_t monitor_version(const SceneMonitor* monitor) {
    return monitor ? monitor->snapshot()->version() : 0;
}

}  // namespace

ExecutionLog execute_strict(const Trajectory& traj, SimClock& clock, const SceneMonitor* monitor) {
    ExecutionLog log;
    const double t0 = clock.t;
    while (clock.t - t0 < traj.total_duration) {
        const auto s = sample_at(traj, clock.t - t0);
        log.events.push_back({clock.t, s.q, monitor_version(monitor), ExecAction::Advance, {}});
        clock.tick();
    }
    const auto s_end = sample_at(traj, traj.total_duration);
    log.events.push_back({clock.t, s_end.q, monitor_version(monitor), ExecAction::GoalReached, {}});
    return log;
}

PreemptResult execute_preemptible(const Trajectory& traj, SimClock& clock,
                                  const std::function<bool(double)>& preempt,
                                  const SceneMonitor* monitor) {
    PreemptResult res;
    const double t0 = clock.t;
    while (true) {
        const double local = std::min(clock.t - t0, traj.total_duration);
        if (preempt && preempt(local)) {
            const auto s = sample_at(traj, local);
            res.log.events.push_back(
                {clock.t, s.q, monitor_version(monitor), ExecAction::Stop, {}});
            res.preempted = true;
            res.t_stop = local;
            std::tie(res.prefix, res.suffix) = executed_split(traj, local);
            return res;
        }
        if (clock.t - t0 >= traj.total_duration)
            break;
        const auto s = sample_at(traj, local);
        res.log.events.push_back({clock.t, s.q, monitor_version(monitor), ExecAction::Advance, {}});
        clock.tick();
    }
    const auto s_end = sample_at(traj, traj.total_duration);
    res.log.events.push_back(
        {clock.t, s_end.q, monitor_version(monitor), ExecAction::GoalReached, {}});
    res.t_stop = traj.total_duration;
    std::tie(res.prefix, res.suffix) = executed_split(traj, traj.total_duration);
    return res;
}

const PathResult* PlanCache::find(const std::string& init_id, const std::string& goal_id) const {
    if (init_id == goal_id)
        return nullptr;  // the diagonal is never stored
    for (const auto& e : entries)
        if (e.init_pos_id == init_id && e.goal_pos_id == goal_id)
            return &e.plan;
    return nullptr;
}

CacheBuildResult build_cache(const ConfigSpace& space,
                             const std::map<std::string, JointConfig>& safe_positions,
                             const PlannerConfig& cfg, Algorithm algorithm) {
    CacheBuildResult res;
    res.cache.safe_positions = safe_positions;

    for (const auto& [init_id, q_init] : safe_positions) {
        for (const auto& [goal_id, q_goal] : safe_positions) {
            if (init_id == goal_id)
                continue;
            // Seed each plan from the exact stored configuration, mirroring
            // the move-then-plan loop.
            PlanOutcome out = plan(algorithm, space, {q_init, q_goal}, cfg);
            if (out.ok())
                res.cache.entries.push_back({init_id, goal_id, std::move(out.path)});
            else
                res.failed_pairs.emplace_back(init_id, goal_id);
        }
    }
    res.success = res.failed_pairs.empty();
    return res;
}

ExecutionLog serve_cached_goals(const PlanCache& cache, const std::vector<std::string>& goals,
                                const Eigen::VectorXd& v_max, const Eigen::VectorXd& a_max,
                                SimClock& clock, std::string current_id) {
    ExecutionLog log;
    auto config_of = [&](const std::string& id) -> JointConfig {
        auto it = cache.safe_positions.find(id);
        return it != cache.safe_positions.end() ? it->second : JointConfig();
    };

    for (const auto& requested : goals) {
        log.events.push_back(
            {clock.t, config_of(current_id), 0, ExecAction::GoalUpdated, requested});
        if (requested == current_id) {
            // The robot is in position.
            log.events.push_back(
                {clock.t, config_of(current_id), 0, ExecAction::GoalReached, requested});
            continue;
        }
        const PathResult* cached = cache.find(current_id, requested);
        if (!cached) {
            log.events.push_back({clock.t, config_of(current_id), 0, ExecAction::Error,
                                  "no cached plan " + current_id + " -> " + requested});
            continue;
        }
        const Trajectory traj = time_parameterize(cached->via_points, v_max, a_max, 1.0);
        ExecutionLog exec = execute_strict(traj, clock);
        log.events.insert(log.events.end(), exec.events.begin(), exec.events.end());
        current_id = requested;
    }
    return log;
}

SuperviseResult supervise_inside(const ArmWorld& world, const PlanQuery& query,
                                 const SuperviseParams& params, SceneMonitor& monitor,
                                 SimClock& clock, const std::function<void(double)>& on_tick) {
    if (!(params.speed_scale > 0.0 && params.speed_scale < 1.0))
        throw std::invalid_argument("supervise_inside: speed_scale must be in (0,1)");

    SuperviseResult res;
    const Eigen::VectorXd v_max = world.model->velocity_limits();
    const Eigen::VectorXd a_max = world.model->acceleration_limits();

    JointConfig q_cur = query.q_init;
    int plan_episodes = 0;

    while (true) {
        if (plan_episodes > params.max_replans) {
            res.log.events.push_back({clock.t, q_cur, monitor.snapshot()->version(),
                                      ExecAction::Error, "max_replans exceeded"});
            return res;
        }
        ++plan_episodes;

        auto snap = monitor.snapshot();
        res.log.events.push_back(
            {clock.t, q_cur, snap->version(), ExecAction::ReplanStarted, {}});
        const ConfigSpace space = make_config_space(world, snap);
        PlanOutcome out = plan(params.algorithm, space, {q_cur, query.q_goal}, params.planner);
        if (!out.ok()) {
            res.log.events.push_back({clock.t, q_cur, snap->version(), ExecAction::Error,
                                      "planning failed: " + out.message});
            if (on_tick)
                on_tick(clock.t);
            clock.tick();
            continue;
        }
        res.log.events.push_back(
            {clock.t, q_cur, snap->version(), ExecAction::ReplanDone, {}});

        const Trajectory traj =
            time_parameterize(out.path.via_points, v_max, a_max, params.speed_scale);
        const double t0 = clock.t;
        bool stopped = false;
        while (true) {
            const double local = std::min(clock.t - t0, traj.total_duration);
            if (on_tick)
                on_tick(clock.t);
            auto latest = monitor.snapshot();
            const auto [prefix, remaining] = executed_split(traj, local);
            const auto bad = first_invalid_via_point(*world.model, *world.cmodel, remaining, 0,
                                                     *latest, world.resolution);
            const JointConfig q_now = remaining.front();
            if (bad) {
                res.log.events.push_back(
                    {clock.t, q_now, latest->version(), ExecAction::Stop, {}});
                q_cur = q_now;
                ++res.replans;
                stopped = true;
                break;
            }
            res.log.events.push_back(
                {clock.t, q_now, latest->version(), ExecAction::Advance, {}});
            if (clock.t - t0 >= traj.total_duration) {
                res.log.events.push_back(
                    {clock.t, q_now, latest->version(), ExecAction::GoalReached, {}});
                res.reached = true;
                return res;
            }
            clock.tick();
        }
        (void)stopped;
    }
}

}  // namespace armplan
