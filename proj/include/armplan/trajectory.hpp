#pragma once

#include "armplan/kinematics.hpp"

#include <utility>
#include <vector>

namespace armplan {

// Trapezoidal (or triangular) velocity profile over the normalized segment
// coordinate s in [0,1]; all joints share this one time law.
struct TrapezoidProfile {
    double t_acc = 0.0;
    double t_cruise = 0.0;
    double t_dec = 0.0;
    double peak_s_vel = 0.0;  // [1/s]

    double duration() const { return t_acc + t_cruise + t_dec; }

    // (s, ds/dt) at local time tau in [0, duration()].
    std::pair<double, double> at(double tau) const;
};

struct TrajectorySegment {
    JointConfig start, end;
    TrapezoidProfile profile;
};

struct Trajectory {
    std::vector<TrajectorySegment> segments;
    std::vector<double> segment_start_times;
    double total_duration = 0.0;
    Eigen::VectorXd v_max, a_max;
    double speed_scale = 1.0;

    const JointConfig& first() const { return segments.front().start; }
    const JointConfig& last() const { return segments.back().end; }
    std::vector<JointConfig> via_points() const;
};

struct TrajectorySample {
    JointConfig q;
    Eigen::VectorXd qdot;
    double t = 0.0;
};

// Linear joint-space interpolation between via points with per-segment
// synchronized trapezoidal profiles; velocity is zero at every via point.
Trajectory time_parameterize(const std::vector<JointConfig>& path, const Eigen::VectorXd& v_max,
                             const Eigen::VectorXd& a_max, double speed_scale = 1.0);

TrajectorySample sample_at(const Trajectory& traj, double t);

// Splits the geometric path at t_stop: the prefix ends at the sampled
// configuration and the remainder starts there.
std::pair<std::vector<JointConfig>, std::vector<JointConfig>> executed_split(
    const Trajectory& traj, double t_stop);

}  // namespace armplan
