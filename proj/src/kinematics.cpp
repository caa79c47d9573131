#include "armplan/kinematics.hpp"

#include <cmath>
#include <stdexcept>

namespace armplan {

bool RobotModel::within_limits(const JointConfig& q) const {
    if (q.size() != dof())
        return false;
    for (int i = 0; i < dof(); ++i)
        if (!(q[i] >= joints[i].limit_min && q[i] <= joints[i].limit_max))
            return false;
    return true;
}

JointConfig RobotModel::clamp_to_limits(const JointConfig& q) const {
    JointConfig out = q;
    for (int i = 0; i < dof(); ++i)
        out[i] = std::clamp(q[i], joints[i].limit_min, joints[i].limit_max);
    return out;
}

Eigen::VectorXd RobotModel::velocity_limits() const {
    Eigen::VectorXd v(dof());
    for (int i = 0; i < dof(); ++i) v[i] = joints[i].v_max;
    return v;
}

Eigen::VectorXd RobotModel::acceleration_limits() const {
    Eigen::VectorXd a(dof());
    for (int i = 0; i < dof(); ++i) a[i] = joints[i].a_max;
    return a;
}

Eigen::VectorXd RobotModel::lower_bounds() const {
    Eigen::VectorXd lo(dof());
    for (int i = 0; i < dof(); ++i) lo[i] = joints[i].limit_min;
    return lo;
}

Eigen::VectorXd RobotModel::upper_bounds() const {
    Eigen::VectorXd hi(dof());
    for (int i = 0; i < dof(); ++i) hi[i] = joints[i].limit_max;
    return hi;
}

namespace {

RigidTransform dh_transform(const DhJoint& j, double q) {
    const double theta = q + j.theta_offset;
    const double ct = std::cos(theta), st = std::sin(theta);
    const double ca = std::cos(j.alpha), sa = std::sin(j.alpha);
    RigidTransform t = RigidTransform::Identity();
    Eigen::Matrix3d r;
    r << ct, -st * ca, st * sa,
         st,  ct * ca, -ct * sa,
          0,       sa,       ca;
    t.linear() = r;
    t.translation() = Eigen::Vector3d(j.a * ct, j.a * st, j.d);
    return t;
}

}  // namespace

std::vector<RigidTransform> forward_kinematics(const RobotModel& model, const JointConfig& q) {
    if (q.size() != model.dof())
        throw std::invalid_argument("forward_kinematics: configuration dimension mismatch");
    std::vector<RigidTransform> frames;
    frames.reserve(model.dof() + 1);
    RigidTransform cur = model.base_transform;
    frames.push_back(cur);
    for (int i = 0; i < model.dof(); ++i) {
        cur = cur * dh_transform(model.joints[i], q[i]);
        frames.push_back(cur);
    }
    return frames;
}

JacobianMatrix jacobian(const RobotModel& model, const JointConfig& q) {
    const auto frames = forward_kinematics(model, q);
    const Eigen::Vector3d p_ee = frames.back().translation();
    JacobianMatrix jac(6, model.dof());
    for (int i = 0; i < model.dof(); ++i) {
        // Joint i rotates about the z axis of the preceding frame.
        const Eigen::Vector3d z = frames[i].linear().col(2);
        const Eigen::Vector3d p = frames[i].translation();
        jac.col(i).head<3>() = z.cross(p_ee - p);
        jac.col(i).tail<3>() = z;
    }
    return jac;
}

Eigen::Vector3d rotation_log(const Eigen::Matrix3d& r) {
    Eigen::AngleAxisd aa(r);
    return aa.angle() * aa.axis();
}

namespace {

// Position error stacked over orientation error, expressed in the base frame.
Eigen::Matrix<double, 6, 1> pose_error(const RigidTransform& target, const RigidTransform& cur) {
    Eigen::Matrix<double, 6, 1> e;
    e.head<3>() = target.translation() - cur.translation();
    e.tail<3>() = rotation_log(target.linear() * cur.linear().transpose());
    return e;
}

}  // namespace

IkResult ik_damped_least_squares(const RobotModel& model, const RigidTransform& target,
                                 const JointConfig& seed, const IkOptions& opts) {
    if (seed.size() != model.dof())
        throw std::invalid_argument("ik_damped_least_squares: seed dimension mismatch");

    IkResult res;
    res.q = model.clamp_to_limits(seed);

    auto residual_of = [&](const JointConfig& q) {
        const auto frames = forward_kinematics(model, q);
        return pose_error(target, frames.back());
    };

    Eigen::Matrix<double, 6, 1> err = residual_of(res.q);
    double best = err.norm();
    res.residual_trace.push_back(best);

    const double lambda2 = opts.damping * opts.damping;
    for (int it = 0; it < opts.max_iters; ++it) {
        res.pos_residual = err.head<3>().norm();
        res.rot_residual = err.tail<3>().norm();
        if (res.pos_residual <= opts.tol_pos && res.rot_residual <= opts.tol_rot) {
            res.success = true;
            res.iterations = it;
            return res;
        }

        const JacobianMatrix jac = jacobian(model, res.q);
        Eigen::Matrix<double, 6, 6> jjt = jac * jac.transpose();
        jjt.diagonal().array() += lambda2;
        Eigen::VectorXd dq = jac.transpose() * jjt.ldlt().solve(err);
        const double max_abs = dq.cwiseAbs().maxCoeff();
        if (max_abs > opts.max_step)
            dq *= opts.max_step / max_abs;

        // Backtrack until the step improves the residual; stop when it cannot.
        bool improved = false;
        for (int bt = 0; bt < 8; ++bt) {
            JointConfig cand = model.clamp_to_limits(res.q + dq);
            Eigen::Matrix<double, 6, 1> cand_err = residual_of(cand);
            if (cand_err.norm() < best) {
                res.q = cand;
                err = cand_err;
                best = cand_err.norm();
                improved = true;
                break;
            }
            dq *= 0.5;
        }
        res.iterations = it + 1;
        res.residual_trace.push_back(best);
        if (!improved)
            break;
    }

    res.pos_residual = err.head<3>().norm();
    res.rot_residual = err.tail<3>().norm();
    res.success = res.pos_residual <= opts.tol_pos && res.rot_residual <= opts.tol_rot;
    return res;
}

bool is_elbow_up(const RobotModel& model, const JointConfig& q) {
    const auto frames = forward_kinematics(model, q);
    const Eigen::Vector3d s = frames.at(model.shoulder_frame).translation();
    const Eigen::Vector3d e = frames.at(model.elbow_frame).translation();
    const Eigen::Vector3d w = frames.at(model.wrist_frame).translation();
    return e.z() > 0.5 * (s.z() + w.z());
}

}  // namespace armplan
