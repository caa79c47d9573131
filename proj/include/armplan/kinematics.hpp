#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <string>
#include <vector>

namespace armplan {

using JointConfig = Eigen::VectorXd;
using RigidTransform = Eigen::Isometry3d;

// Standard DH joint descriptor plus the per-joint bounds the planner and
// trajectory modules consume.
struct DhJoint {
    double a = 0.0;             // link length [m]
    double alpha = 0.0;         // link twist [rad]
    double d = 0.0;             // link offset [m]
    double theta_offset = 0.0;  // joint angle offset [rad]
    double limit_min = -2.0 * M_PI;
    double limit_max = 2.0 * M_PI;
    double v_max = M_PI;        // [rad/s]
    double a_max = 2.0 * M_PI;  // [rad/s^2]
};

struct RobotModel {
    std::string name;
    std::vector<DhJoint> joints;
    RigidTransform base_transform = RigidTransform::Identity();

    // Frame indices (into the forward_kinematics output) used by the
    // elbow-up predicate. Frame k is the pose after the first k joints.
    int shoulder_frame = 1;
    int elbow_frame = 2;
    int wrist_frame = 3;

    int dof() const { return static_cast<int>(joints.size()); }

    JointConfig zero_config() const { return JointConfig::Zero(dof()); }

    bool within_limits(const JointConfig& q) const;
    JointConfig clamp_to_limits(const JointConfig& q) const;

    Eigen::VectorXd velocity_limits() const;
    Eigen::VectorXd acceleration_limits() const;
    Eigen::VectorXd lower_bounds() const;
    Eigen::VectorXd upper_bounds() const;
};

// Frames after each joint, base frame first: result[0] is base_transform,
// result[k] is base * T_1 * ... * T_k, result.back() the end-effector pose.
std::vector<RigidTransform> forward_kinematics(const RobotModel& model, const JointConfig& q);

// Geometric Jacobian at the end effector: rows 0-2 linear, 3-5 angular,
// one column per joint.
using JacobianMatrix = Eigen::Matrix<double, 6, Eigen::Dynamic>;
JacobianMatrix jacobian(const RobotModel& model, const JointConfig& q);

struct IkResult {
    bool success = false;
    JointConfig q;
    double pos_residual = 0.0;
    double rot_residual = 0.0;
    int iterations = 0;
    // Combined twist-error norm after each accepted iterate, non-increasing.
    std::vector<double> residual_trace;
};

struct IkOptions {
    int max_iters = 200;
    double tol_pos = 1e-4;   // [m]
    double tol_rot = 1e-3;   // [rad]
    double damping = 0.05;
    double max_step = 0.2;   // per-joint clamp [rad]
};

IkResult ik_damped_least_squares(const RobotModel& model, const RigidTransform& target,
                                 const JointConfig& seed, const IkOptions& opts = {});

// True iff the elbow sits above the midpoint of the shoulder-wrist chord
// (base-frame z).
bool is_elbow_up(const RobotModel& model, const JointConfig& q);

// Rotation difference as an axis-angle vector, |v| = angle.
Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r);

}  // namespace armplan
