#include "armplan/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace armplan {

std::pair<double, double> TrapezoidProfile::at(double tau) const {
    const double dur = duration();
    if (dur <= 0.0)
        return {0.0, 0.0};
    tau = std::clamp(tau, 0.0, dur);
    const double accel = t_acc > 0.0 ? peak_s_vel / t_acc : 0.0;
    if (tau < t_acc)
        return {0.5 * accel * tau * tau, accel * tau};
    const double s_acc = 0.5 * peak_s_vel * t_acc;
    if (tau < t_acc + t_cruise)
        return {s_acc + peak_s_vel * (tau - t_acc), peak_s_vel};
    const double rem = dur - tau;
    const double decel = t_dec > 0.0 ? peak_s_vel / t_dec : 0.0;
    return {1.0 - 0.5 * decel * rem * rem, decel * rem};
}

std::vector<JointConfig> Trajectory::via_points() const {
    std::vector<JointConfig> out;
    out.reserve(segments.size() + 1);
    out.push_back(segments.front().start);
    for (const auto& s : segments)
        out.push_back(s.end);
    if (out.size() >= 2 && out[0] == out[1] && segments.size() == 1 &&
        segments.front().profile.duration() == 0.0)
        out.pop_back();  // degenerate single-point trajectory
    return out;
}

namespace {

TrapezoidProfile profile_for(const JointConfig& a, const JointConfig& b,
                             const Eigen::VectorXd& v_max, const Eigen::VectorXd& a_max,
                             double scale) {
    TrapezoidProfile prof;
    double v_s = std::numeric_limits<double>::infinity();
    double a_s = std::numeric_limits<double>::infinity();
    bool moves = false;
    for (int j = 0; j < a.size(); ++j) {
        const double dq = std::abs(b[j] - a[j]);
        if (dq <= 0.0)
            continue;
        moves = true;
        v_s = std::min(v_s, scale * v_max[j] / dq);
        a_s = std::min(a_s, scale * a_max[j] / dq);
    }
    if (!moves)
        return prof;  // zero-duration segment

    if (v_s * v_s / a_s >= 1.0) {
        // Velocity limit never reached: triangular profile.
        prof.t_acc = std::sqrt(1.0 / a_s);
        prof.t_dec = prof.t_acc;
        prof.t_cruise = 0.0;
        prof.peak_s_vel = a_s * prof.t_acc;
    } else {
        prof.t_acc = v_s / a_s;
        prof.t_dec = prof.t_acc;
        prof.t_cruise = (1.0 - v_s * v_s / a_s) / v_s;
        prof.peak_s_vel = v_s;
    }
    return prof;
}

}  // namespace

Trajectory time_parameterize(const std::vector<JointConfig>& path, const Eigen::VectorXd& v_max,
                             const Eigen::VectorXd& a_max, double speed_scale) {
    if (path.empty())
        throw std::invalid_argument("time_parameterize: empty path");
    if (!(speed_scale > 0.0 && speed_scale <= 1.0))
        throw std::invalid_argument("time_parameterize: speed_scale must be in (0,1]");
    for (int j = 0; j < v_max.size(); ++j)
        if (!(v_max[j] > 0.0) || !(a_max[j] > 0.0))
            throw std::invalid_argument("time_parameterize: limits must be positive");

    Trajectory traj;
    traj.v_max = v_max;
    traj.a_max = a_max;
    traj.speed_scale = speed_scale;

    double t = 0.0;
    if (path.size() == 1) {
        traj.segments.push_back({path[0], path[0], {}});
        traj.segment_start_times.push_back(0.0);
        traj.total_duration = 0.0;
        return traj;
    }
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        TrajectorySegment seg{path[i], path[i + 1],
                              profile_for(path[i], path[i + 1], v_max, a_max, speed_scale)};
        traj.segment_start_times.push_back(t);
        t += seg.profile.duration();
        traj.segments.push_back(std::move(seg));
    }
    traj.total_duration = t;
    return traj;
}

namespace {

// Segment index and local time for a global time t.
std::pair<size_t, double> locate(const Trajectory& traj, double t) {
    const auto& starts = traj.segment_start_times;
    size_t k = std::upper_bound(starts.begin(), starts.end(), t) - starts.begin();
    k = k > 0 ? k - 1 : 0;
    // Skip past zero-duration segments that start exactly at t.
    while (k + 1 < traj.segments.size() &&
           t >= starts[k] + traj.segments[k].profile.duration())
        ++k;
    return {k, t - starts[k]};
}

}  // namespace

TrajectorySample sample_at(const Trajectory& traj, double t) {
    if (t < 0.0 || t > traj.total_duration + 1e-12)
        throw std::out_of_range("sample_at: time outside trajectory");
    if (t >= traj.total_duration) {
        TrajectorySample sample;
        sample.t = traj.total_duration;
        sample.q = traj.segments.back().end;
        sample.qdot = Eigen::VectorXd::Zero(sample.q.size());
        return sample;
    }

    const auto [k, tau] = locate(traj, t);
    const auto& seg = traj.segments[k];
    const auto [s, sdot] = seg.profile.at(tau);

    TrajectorySample sample;
    sample.t = t;
    sample.q = seg.start + s * (seg.end - seg.start);
    sample.qdot = sdot * (seg.end - seg.start);
    return sample;
}

std::pair<std::vector<JointConfig>, std::vector<JointConfig>> executed_split(
    const Trajectory& traj, double t_stop) {
    const auto [k, tau] = locate(traj, std::clamp(t_stop, 0.0, traj.total_duration));
    const JointConfig q_split = sample_at(traj, std::clamp(t_stop, 0.0, traj.total_duration)).q;

    std::vector<JointConfig> prefix;
    prefix.push_back(traj.segments[0].start);
    for (size_t i = 0; i < k; ++i)
        prefix.push_back(traj.segments[i].end);
    if (prefix.back() != q_split)
        prefix.push_back(q_split);

    std::vector<JointConfig> remaining;
    remaining.push_back(q_split);
    for (size_t i = k; i < traj.segments.size(); ++i)
        if (traj.segments[i].end != remaining.back())
            remaining.push_back(traj.segments[i].end);
    return {prefix, remaining};
}

}  // namespace armplan
