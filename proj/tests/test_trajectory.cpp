#include "armplan/trajectory.hpp"

#include "armplan/planners.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace armplan;
using armplan::test::q2;

namespace {

Eigen::VectorXd vec1(double v) {
    Eigen::VectorXd out(1);
    out << v;
    return out;
}

std::vector<JointConfig> random_path(Rng& rng, int dof, int n) {
    std::vector<JointConfig> path;
    for (int k = 0; k < n; ++k) {
        JointConfig q(dof);
        for (int i = 0; i < dof; ++i)
            q[i] = rng.uniform(-2.0, 2.0);
        path.push_back(q);
    }
    return path;
}

}  // namespace

TEST_CASE("single via point has zero duration") {
    JointConfig q(1);
    q << 0.3;
    const Trajectory traj = time_parameterize({q}, vec1(1.0), vec1(1.0));
    CHECK(traj.total_duration == 0.0);
    const TrajectorySample s = sample_at(traj, 0.0);
    CHECK((s.q - q).norm() == 0.0);
    CHECK(s.qdot.norm() == 0.0);
}

TEST_CASE("trapezoid closed forms") {
    JointConfig a(1), b(1);
    a << 0.0;
    b << 1.0;

    SUBCASE("near-infinite acceleration approaches the cruise-only bound") {
        const Trajectory traj = time_parameterize({a, b}, vec1(1.0), vec1(1e6));
        CHECK(traj.total_duration == doctest::Approx(1.0).epsilon(1e-3));
    }

    SUBCASE("triangular profile when the cruise speed is unreachable") {
        const Trajectory traj = time_parameterize({a, b}, vec1(1.0), vec1(1.0));
        CHECK(traj.total_duration == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("boundary conditions and cruise speed") {
    Rng rng(30);
    const auto path = random_path(rng, 3, 5);
    Eigen::VectorXd v_max(3), a_max(3);
    v_max << 1.0, 2.0, 1.5;
    a_max << 4.0, 3.0, 5.0;
    const double scale = 0.5;
    const Trajectory traj = time_parameterize(path, v_max, a_max, scale);

    SUBCASE("zero velocity at both trajectory ends") {
        CHECK((sample_at(traj, 0.0).q - path.front()).norm() == 0.0);
        CHECK(sample_at(traj, 0.0).qdot.norm() == 0.0);
        CHECK((sample_at(traj, traj.total_duration).q - path.back()).norm() < 1e-12);
        CHECK(sample_at(traj, traj.total_duration).qdot.norm() < 1e-12);
    }

    SUBCASE("zero velocity at every via point") {
        for (double t : traj.segment_start_times) {
            CHECK(sample_at(traj, t).qdot.norm() < 1e-12);
        }
    }

    SUBCASE("binding joint cruises at the scaled limit") {
        for (size_t k = 0; k < traj.segments.size(); ++k) {
            const auto& seg = traj.segments[k];
            if (seg.profile.t_cruise <= 0.0)
                continue;
            const double mid =
                traj.segment_start_times[k] + seg.profile.t_acc + 0.5 * seg.profile.t_cruise;
            const Eigen::VectorXd qdot = sample_at(traj, mid).qdot;
            double best = 0.0;
            for (int i = 0; i < qdot.size(); ++i)
                best = std::max(best, std::abs(qdot[i]) / (scale * v_max[i]));
            CHECK(best == doctest::Approx(1.0).epsilon(1e-9));
        }
    }

    SUBCASE("out-of-range sampling is rejected") {
        CHECK_THROWS(sample_at(traj, -0.01));
        CHECK_THROWS(sample_at(traj, traj.total_duration + 0.01));
    }
}

TEST_CASE("limits are respected on random paths") {
    Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto path = random_path(rng, 2, 2 + static_cast<int>(rng.index(4)));
        Eigen::VectorXd v_max(2), a_max(2);
        v_max << rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0);
        a_max << rng.uniform(1.0, 5.0), rng.uniform(1.0, 5.0);
        const double scale = rng.uniform(0.2, 1.0);
        const Trajectory traj = time_parameterize(path, v_max, a_max, scale);

        const double dt = 1e-5;
        for (double t = 0.0; t <= traj.total_duration; t += traj.total_duration / 400.0) {
            const auto s = sample_at(traj, t);
            for (int i = 0; i < 2; ++i)
                CHECK(std::abs(s.qdot[i]) <= scale * v_max[i] + 1e-9);
            // velocities match differentiated positions away from breakpoints
            if (t + dt <= traj.total_duration) {
                const auto s2 = sample_at(traj, t + dt);
                bool near_break = false;
                for (size_t k = 0; k < traj.segments.size(); ++k) {
                    const double t0 = traj.segment_start_times[k];
                    const auto& p = traj.segments[k].profile;
                    for (double brk : {t0, t0 + p.t_acc, t0 + p.t_acc + p.t_cruise,
                                       t0 + p.duration()})
                        if (std::abs(t - brk) < 2 * dt)
                            near_break = true;
                }
                if (!near_break) {
                    const Eigen::VectorXd fd = (s2.q - s.q) / dt;
                    CHECK((fd - s.qdot).cwiseAbs().maxCoeff() < 1e-4);
                }
            }
            if (traj.total_duration == 0.0)
                break;
        }
    }
}

TEST_CASE("sampled positions stay on the straight segments") {
    Rng rng(32);
    const auto path = random_path(rng, 2, 4);
    const Trajectory traj = time_parameterize(path, vec1(1.0).replicate(2, 1),
                                              vec1(2.0).replicate(2, 1));
    for (double t = 0.0; t <= traj.total_duration; t += traj.total_duration / 300.0) {
        const auto s = sample_at(traj, t);
        double best = kInfiniteClearance;
        for (size_t k = 1; k < path.size(); ++k)
            best = std::min(best, segment_segment_distance(
                                      Eigen::Vector3d(s.q[0], s.q[1], 0),
                                      Eigen::Vector3d(s.q[0], s.q[1], 0),
                                      Eigen::Vector3d(path[k - 1][0], path[k - 1][1], 0),
                                      Eigen::Vector3d(path[k][0], path[k][1], 0)));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("duration decreases monotonically with speed scale") {
    Rng rng(33);
    const auto path = random_path(rng, 3, 4);
    Eigen::VectorXd v_max = Eigen::VectorXd::Constant(3, 1.2);
    Eigen::VectorXd a_max = Eigen::VectorXd::Constant(3, 3.0);
    double prev = kInfiniteClearance;
    for (double scale : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        const double dur = time_parameterize(path, v_max, a_max, scale).total_duration;
        CHECK(dur <= prev);
        prev = dur;
    }
}

TEST_CASE("executed_split partitions the path") {
    Rng rng(34);
    const auto path = random_path(rng, 2, 5);
    Eigen::VectorXd v_max = Eigen::VectorXd::Constant(2, 1.0);
    Eigen::VectorXd a_max = Eigen::VectorXd::Constant(2, 2.0);
    const Trajectory traj = time_parameterize(path, v_max, a_max);

    SUBCASE("t_stop = 0") {
        const auto [prefix, remaining] = executed_split(traj, 0.0);
        REQUIRE(prefix.size() == 1);
        CHECK((prefix.front() - path.front()).norm() == 0.0);
        REQUIRE(remaining.size() == path.size());
        for (size_t i = 0; i < path.size(); ++i)
            CHECK((remaining[i] - path[i]).norm() == 0.0);
    }

    SUBCASE("t_stop = duration") {
        const auto [prefix, remaining] = executed_split(traj, traj.total_duration);
        REQUIRE(remaining.size() == 1);
        CHECK((remaining.front() - path.back()).norm() < 1e-12);
        CHECK((prefix.back() - path.back()).norm() < 1e-12);
    }

    SUBCASE("mid-segment split point appears in both halves") {
        const double t_stop = 0.37 * traj.total_duration;
        const auto [prefix, remaining] = executed_split(traj, t_stop);
        const JointConfig at_stop = sample_at(traj, t_stop).q;
        CHECK((prefix.back() - at_stop).norm() == 0.0);
        CHECK((remaining.front() - at_stop).norm() == 0.0);
        // prefix tail + remaining reconstructs the original via-point set
        CHECK(prefix.size() + remaining.size() >= path.size() + 1);
        size_t k = 0;
        for (const auto& q : prefix)
            if (k < path.size() && (q - path[k]).norm() == 0.0)
                ++k;
        for (const auto& q : remaining)
            if (k < path.size() && (q - path[k]).norm() == 0.0)
                ++k;
        CHECK(k == path.size());
    }
}

TEST_CASE("time_parameterize input validation") {
    Eigen::VectorXd v = vec1(1.0), a = vec1(1.0);
    CHECK_THROWS(time_parameterize({}, v, a));
    JointConfig q(1);
    q << 0.0;
    CHECK_THROWS(time_parameterize({q, q}, v, a, 0.0));
    CHECK_THROWS(time_parameterize({q, q}, v, a, 1.5));
    CHECK_THROWS(time_parameterize({q, q}, vec1(0.0), a));
}
