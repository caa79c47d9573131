#include "armplan/mannequin.hpp"

#include <algorithm>
#include <cmath>

namespace armplan {

MannequinModel default_mannequin(const RigidTransform& torso_pose) {
    MannequinModel m;
    m.torso_pose = torso_pose;

    auto make_arm = [](double lateral) {
        MannequinArm arm;
        arm.mount = RigidTransform::Identity();
        arm.mount.translation() = Eigen::Vector3d(0.0, lateral, 0.02);
        // 3 shoulder joints, elbow, 3 wrist joints; rest pose extends along +x.
        arm.joints[0] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ()};
        arm.joints[1] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY()};
        arm.joints[2] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitX()};
        arm.joints[3] = {Eigen::Vector3d(arm.upper_arm, 0, 0), Eigen::Vector3d::UnitY()};
        arm.joints[4] = {Eigen::Vector3d(arm.forearm, 0, 0), Eigen::Vector3d::UnitX()};
        arm.joints[5] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitY()};
        arm.joints[6] = {Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ()};
        arm.humerus_tracker = Eigen::Vector3d(arm.upper_arm / 2.0, 0, 0);
        arm.palm_tracker = Eigen::Vector3d(arm.palm, 0, 0);
        return arm;
    };
    m.left = make_arm(0.04);
    m.right = make_arm(-0.04);
    return m;
}

MannequinModel seated_mannequin() {
    RigidTransform seat = RigidTransform::Identity();
    seat.translation() = Eigen::Vector3d(-1.15, 0.0, 0.85);
    return default_mannequin(seat);
}

namespace {

ArmPose arm_fk(const MannequinModel& model, const MannequinArm& arm,
               const Eigen::Matrix<double, 7, 1>& q) {
    ArmPose pose;
    RigidTransform f = model.torso_pose * arm.mount;
    pose.shoulder = f.translation();
    pose.frames.reserve(7);
    for (int i = 0; i < 7; ++i) {
        f.translation() += f.linear() * arm.joints[i].offset;
        f.linear() = f.linear() * Eigen::AngleAxisd(q[i], arm.joints[i].axis).toRotationMatrix();
        pose.frames.push_back(f);
    }
    pose.elbow = pose.frames[3].translation();
    pose.wrist = pose.frames[6].translation();
    pose.palm_tip = pose.frames[6] * Eigen::Vector3d(arm.palm, 0, 0);
    pose.humerus_tracker = pose.frames[2] * arm.humerus_tracker;
    pose.palm_tracker = pose.frames[6] * arm.palm_tracker;
    return pose;
}

CollisionBody segment_capsule(const std::string& id, const Eigen::Vector3d& a,
                              const Eigen::Vector3d& b, double radius) {
    CollisionBody body;
    body.id = id;
    body.shape = Capsule{a, b, radius};
    body.pose = RigidTransform::Identity();
    body.tag = BodyTag::User;
    return body;
}

}  // namespace

MannequinPose mannequin_fk(const MannequinModel& model, const MannequinConfig& cfg) {
    MannequinPose pose;
    pose.left = arm_fk(model, model.left, cfg.angles.head<7>());
    pose.right = arm_fk(model, model.right, cfg.angles.tail<7>());
    return pose;
}

MannequinConfig config_at(const MotionScript& script, double t) {
    const auto& kf = script.keyframes;
    if (kf.empty())
        return MannequinConfig::zero();
    if (t <= kf.front().first)
        return kf.front().second;
    if (t >= kf.back().first)
        return kf.back().second;
    for (size_t i = 1; i < kf.size(); ++i) {
        if (t <= kf[i].first) {
            const double t0 = kf[i - 1].first, t1 = kf[i].first;
            const double s = (t - t0) / (t1 - t0);
            MannequinConfig out;
            out.angles = (1.0 - s) * kf[i - 1].second.angles + s * kf[i].second.angles;
            return out;
        }
    }
    return kf.back().second;
}

std::vector<CollisionBody> bodies_at(const MannequinModel& model, const MannequinConfig& cfg) {
    const MannequinPose pose = mannequin_fk(model, cfg);
    std::vector<CollisionBody> bodies;
    bodies.reserve(7);

    CollisionBody torso;
    torso.id = "torso";
    torso.shape = model.torso;
    torso.pose = model.torso_pose;
    torso.tag = BodyTag::User;
    bodies.push_back(torso);

    auto add_arm = [&](const std::string& prefix, const ArmPose& ap, const MannequinArm& arm) {
        bodies.push_back(segment_capsule(prefix + "_upper_arm", ap.shoulder, ap.elbow,
                                         arm.capsule_radius));
        bodies.push_back(segment_capsule(prefix + "_forearm", ap.elbow, ap.wrist,
                                         arm.capsule_radius));
        bodies.push_back(segment_capsule(prefix + "_palm", ap.wrist, ap.palm_tip,
                                         arm.capsule_radius));
    };
    add_arm("left", pose.left, model.left);
    add_arm("right", pose.right, model.right);
    return bodies;
}

WorkspaceSphere workspace_sphere(const MannequinModel& model) {
    WorkspaceSphere s;
    s.center = model.torso_pose.translation();
    s.radius = std::max(model.left.reach(), model.right.reach()) + model.workspace_margin;
    return s;
}

CollisionBody workspace_sphere_body(const MannequinModel& model) {
    const WorkspaceSphere s = workspace_sphere(model);
    CollisionBody body;
    body.id = "user_workspace";
    body.shape = Sphere{s.radius};
    body.pose = RigidTransform::Identity();
    body.pose.translation() = s.center;
    body.tag = BodyTag::WorkspaceSphere;
    return body;
}

}  // namespace armplan
