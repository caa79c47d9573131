#pragma once

#include "armplan/executor.hpp"
#include "armplan/mannequin.hpp"

#include <string>

namespace armplan {

struct RobotDescription {
    RobotModel model;
    RobotCollisionModel cmodel;
};

// Robot description JSON: name, DH joints with limits, base height, link
// capsules and the allowed self-collision pairs.
RobotDescription load_robot_description(const std::string& path);

std::vector<CollisionBody> load_scene(const std::string& path);
void save_scene(const std::string& path, const std::vector<CollisionBody>& bodies);

struct NamedQuery {
    std::string name;
    JointConfig q_init, q_goal;
};

std::vector<NamedQuery> load_queries(const std::string& path);

std::map<std::string, JointConfig> load_named_configs(const std::string& path);
void save_named_configs(const std::string& path, const std::map<std::string, JointConfig>& configs);

PlanCache load_plan_cache(const std::string& path);
void save_plan_cache(const std::string& path, const PlanCache& cache);

// CSV, header `t,j1..j14`, one keyframe per row.
MotionScript load_motion_script(const std::string& path);
void save_motion_script(const std::string& path, const MotionScript& script);

// CSV, `t,event,version,q1..qN`.
void write_execution_log_csv(const std::string& path, const ExecutionLog& log);

// CSV, `t,q1..qN,v1..vN` at a fixed 10 ms sampling.
void write_trajectory_log_csv(const std::string& path, const Trajectory& traj);

}  // namespace armplan
