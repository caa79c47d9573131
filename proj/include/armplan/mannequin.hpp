#pragma once

#include "armplan/collision.hpp"

#include <array>
#include <vector>

namespace armplan {

// One revolute joint of the mannequin arm: the joint frame is the parent
// frame translated by `offset` then rotated about `axis` by the joint angle.
struct MannequinJoint {
    Eigen::Vector3d offset = Eigen::Vector3d::Zero();
    Eigen::Vector3d axis = Eigen::Vector3d::UnitZ();
};

struct MannequinArm {
    RigidTransform mount = RigidTransform::Identity();  // shoulder pose in torso frame
    std::array<MannequinJoint, 7> joints;               // 3 shoulder, 1 elbow, 3 wrist
    double upper_arm = 0.30;
    double forearm = 0.25;
    double palm = 0.10;
    double capsule_radius = 0.05;
    Eigen::Vector3d humerus_tracker = Eigen::Vector3d::Zero();  // in upper-arm frame
    Eigen::Vector3d palm_tracker = Eigen::Vector3d::Zero();     // in wrist frame

    double reach() const { return upper_arm + forearm + palm; }
};

struct MannequinModel {
    Box torso{Eigen::Vector3d(0.20, 0.15, 0.30)};
    RigidTransform torso_pose = RigidTransform::Identity();
    MannequinArm left, right;
    double workspace_margin = 0.1;  // [m]
};

struct MannequinConfig {
    Eigen::Matrix<double, 14, 1> angles = Eigen::Matrix<double, 14, 1>::Zero();  // left then right

    static MannequinConfig zero() { return {}; }
};

struct ArmPose {
    Eigen::Vector3d shoulder, elbow, wrist, palm_tip;  // world positions
    Eigen::Vector3d humerus_tracker, palm_tracker;
    std::vector<RigidTransform> frames;  // one per joint, world frame
};

struct MannequinPose {
    ArmPose left, right;
};

struct MotionScript {
    std::vector<std::pair<double, MannequinConfig>> keyframes;  // strictly increasing times
};

struct WorkspaceSphere {
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double radius = 0.0;
};

// Seated adult-scale defaults, torso placed at `torso_pose`.
MannequinModel default_mannequin(const RigidTransform& torso_pose = RigidTransform::Identity());

// Default mannequin in the bundled car seat, chest facing the robot.
MannequinModel seated_mannequin();

MannequinPose mannequin_fk(const MannequinModel& model, const MannequinConfig& cfg);

MannequinConfig config_at(const MotionScript& script, double t);

// Torso box plus three capsules per arm (upper arm, forearm, palm), posed by
// FK; body ids are stable across calls.
std::vector<CollisionBody> bodies_at(const MannequinModel& model, const MannequinConfig& cfg);

WorkspaceSphere workspace_sphere(const MannequinModel& model);

CollisionBody workspace_sphere_body(const MannequinModel& model);

}  // namespace armplan
