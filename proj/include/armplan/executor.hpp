#pragma once

#include "armplan/collision.hpp"
#include "armplan/planners.hpp"
#include "armplan/trajectory.hpp"

#include <map>
#include <memory>
#include <mutex>

namespace armplan {

// Single writer, many readers; readers always see a complete snapshot and
// never a decreasing version.
class SceneMonitor {
public:
    SceneMonitor();
    explicit SceneMonitor(std::vector<CollisionBody> initial_bodies, double time = 0.0);

    std::shared_ptr<const SceneSnapshot> snapshot() const;
    uint64_t publish(std::vector<CollisionBody> bodies, double time);
    std::vector<std::pair<uint64_t, double>> update_log() const;

private:
    mutable std::mutex mutex_;
    std::shared_ptr<const SceneSnapshot> snapshot_;
    std::vector<std::pair<uint64_t, double>> log_;
};

struct SimClock {
    double t = 0.0;
    double dt = 0.01;  // control tick [s]

    void tick() { t += dt; }
};

enum class ExecAction {
    Advance,
    Stop,
    ReplanStarted,
    ReplanDone,
    GoalReached,
    GoalUpdated,
    Error,
};

const char* exec_action_name(ExecAction a);

struct ExecEvent {
    double t = 0.0;
    JointConfig q;
    uint64_t version = 0;
    ExecAction action = ExecAction::Advance;
    std::string detail;
};

struct ExecutionLog {
    std::vector<ExecEvent> events;

    size_t count(ExecAction a) const;
    const ExecEvent* last(ExecAction a) const;
};

// Robot bound to its collision model; predicates are built against a given
// immutable snapshot.
struct ArmWorld {
    const RobotModel* model = nullptr;
    const RobotCollisionModel* cmodel = nullptr;
    double resolution = kDefaultValidityResolution;
};

ConfigSpace make_config_space(const ArmWorld& world,
                              std::shared_ptr<const SceneSnapshot> snapshot,
                              bool with_clearance = true);

// Runs the trajectory to completion at the clock's tick.
ExecutionLog execute_strict(const Trajectory& traj, SimClock& clock,
                            const SceneMonitor* monitor = nullptr);

struct PreemptResult {
    ExecutionLog log;
    bool preempted = false;
    double t_stop = 0.0;
    std::vector<JointConfig> prefix, suffix;
};

// Same as execute_strict until `preempt(local_time)` returns true; then the
// trajectory is split at that tick and both halves are returned.
PreemptResult execute_preemptible(const Trajectory& traj, SimClock& clock,
                                  const std::function<bool(double)>& preempt,
                                  const SceneMonitor* monitor = nullptr);

struct PlanCacheEntry {
    std::string init_pos_id;
    std::string goal_pos_id;
    PathResult plan;
};

struct PlanCache {
    std::map<std::string, JointConfig> safe_positions;
    std::vector<PlanCacheEntry> entries;

    const PathResult* find(const std::string& init_id, const std::string& goal_id) const;
};

struct CacheBuildResult {
    bool success = false;
    PlanCache cache;
    std::vector<std::pair<std::string, std::string>> failed_pairs;
};

// Plans every ordered pair of safe positions against the given (static)
// space; the workspace sphere must already be a body of the bound snapshot.
CacheBuildResult build_cache(const ConfigSpace& space,
                             const std::map<std::string, JointConfig>& safe_positions,
                             const PlannerConfig& cfg, Algorithm algorithm = Algorithm::BiTrrt);

// Serves a stream of desired-frame ids from the cache, strict execution
// only, never invoking a planner. `current_id` must name a safe position.
ExecutionLog serve_cached_goals(const PlanCache& cache, const std::vector<std::string>& goals,
                                const Eigen::VectorXd& v_max, const Eigen::VectorXd& a_max,
                                SimClock& clock, std::string current_id = "home");

struct SuperviseParams {
    double speed_scale = 0.25;  // must be < 1 inside the user workspace
    int max_replans = 10;
    Algorithm algorithm = Algorithm::BiTrrt;
    PlannerConfig planner;
};

struct SuperviseResult {
    ExecutionLog log;
    bool reached = false;
    int replans = 0;
};

// Stop-and-replan supervisor: executes tick by tick at reduced speed,
// revalidates the remaining path against the monitor's latest snapshot on
// every tick, and replans from the current configuration when it becomes
// invalid. `on_tick` runs before each validity check and lets the caller
// publish scene updates.
SuperviseResult supervise_inside(const ArmWorld& world, const PlanQuery& query,
                                 const SuperviseParams& params, SceneMonitor& monitor,
                                 SimClock& clock,
                                 const std::function<void(double)>& on_tick = {});

}  // namespace armplan
