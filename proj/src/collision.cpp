#include "armplan/collision.hpp"

#include <algorithm>
#include <cmath>

namespace armplan {

namespace {

// Closest distance between segments [p0,p1] and [q0,q1] (Ericson, RTCD 5.1.9).
double closest_pt_segment_segment(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                  const Eigen::Vector3d& q0, const Eigen::Vector3d& q1,
                                  Eigen::Vector3d& c1, Eigen::Vector3d& c2) {
    const Eigen::Vector3d d1 = p1 - p0;
    const Eigen::Vector3d d2 = q1 - q0;
    const Eigen::Vector3d r = p0 - q0;
    const double a = d1.squaredNorm();
    const double e = d2.squaredNorm();
    const double f = d2.dot(r);
    const double eps = 1e-12;

    double s, t;
    if (a <= eps && e <= eps) {
        s = t = 0.0;
    } else if (a <= eps) {
        s = 0.0;
        t = std::clamp(f / e, 0.0, 1.0);
    } else {
        const double c = d1.dot(r);
        if (e <= eps) {
            t = 0.0;
            s = std::clamp(-c / a, 0.0, 1.0);
        } else {
            const double b = d1.dot(d2);
            const double denom = a * e - b * b;
            s = denom > eps ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
            t = (b * s + f) / e;
            if (t < 0.0) {
                t = 0.0;
                s = std::clamp(-c / a, 0.0, 1.0);
            } else if (t > 1.0) {
                t = 1.0;
                s = std::clamp((b - c) / a, 0.0, 1.0);
            }
        }
    }
    c1 = p0 + s * d1;
    c2 = q0 + t * d2;
    return (c1 - c2).norm();
}

WorldCapsule to_world(const Capsule& c, const RigidTransform& pose) {
    return {pose * c.p0, pose * c.p1, c.radius};
}

double capsule_capsule(const WorldCapsule& a, const WorldCapsule& b) {
    Eigen::Vector3d c1, c2;
    const double d = closest_pt_segment_segment(a.p0, a.p1, b.p0, b.p1, c1, c2);
    return d - a.radius - b.radius;
}

double sphere_sphere(const Sphere& a, const Eigen::Vector3d& ca,
                     const Sphere& b, const Eigen::Vector3d& cb) {
    return (ca - cb).norm() - a.radius - b.radius;
}

double sphere_capsule(const Sphere& s, const Eigen::Vector3d& c, const WorldCapsule& cap) {
    Eigen::Vector3d c1, c2;
    const double d = closest_pt_segment_segment(c, c, cap.p0, cap.p1, c1, c2);
    return d - s.radius - cap.radius;
}

// Exact signed distance between a sphere and an oriented box.
double sphere_box(const Sphere& s, const Eigen::Vector3d& center,
                  const Box& b, const RigidTransform& pose_b) {
    const Eigen::Vector3d local = pose_b.inverse() * center;
    const Eigen::Vector3d he = b.half_extents;
    bool inside = true;
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double excess = std::abs(local[i]) - he[i];
        if (excess > 0.0) {
            inside = false;
            d2 += excess * excess;
        }
    }
    if (!inside)
        return std::sqrt(d2) - s.radius;
    double depth = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        depth = std::min(depth, he[i] - std::abs(local[i]));
    return -(depth + s.radius);
}

// Separating-axis overlap test for two oriented boxes (Ericson, RTCD 4.4).
bool box_box_overlap(const Box& a, const RigidTransform& pose_a,
                     const Box& b, const RigidTransform& pose_b) {
    const Eigen::Matrix3d ra = pose_a.linear();
    const Eigen::Matrix3d rb = pose_b.linear();
    const Eigen::Matrix3d r = ra.transpose() * rb;
    const Eigen::Vector3d t = ra.transpose() * (pose_b.translation() - pose_a.translation());
    Eigen::Matrix3d abs_r = r.cwiseAbs();
    abs_r.array() += 1e-12;  // robustness for near-parallel edges
    const Eigen::Vector3d& ea = a.half_extents;
    const Eigen::Vector3d& eb = b.half_extents;

    for (int i = 0; i < 3; ++i)
        if (std::abs(t[i]) > ea[i] + eb.dot(abs_r.row(i)))
            return false;
    for (int j = 0; j < 3; ++j)
        if (std::abs(t.dot(r.col(j))) > ea.dot(abs_r.col(j)) + eb[j])
            return false;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
            const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
            const double ra_proj = ea[i1] * abs_r(i2, j) + ea[i2] * abs_r(i1, j);
            const double rb_proj = eb[j1] * abs_r(i, j2) + eb[j2] * abs_r(i, j1);
            if (std::abs(t[i2] * r(i1, j) - t[i1] * r(i2, j)) > ra_proj + rb_proj)
                return false;
        }
    }
    return true;
}

double capsule_cover_distance(const WorldCapsule& cap, const Box& box,
                              const RigidTransform& pose_box) {
    double best = kInfiniteClearance;
    for (const Capsule& c : box_capsule_cover(box))
        best = std::min(best, capsule_capsule(cap, to_world(c, pose_box)));
    return best;
}

}  // namespace

std::vector<Capsule> box_capsule_cover(const Box& box) {
    const Eigen::Vector3d he = box.half_extents;
    int k;
    he.maxCoeff(&k);
    const int u = (k + 1) % 3, v = (k + 2) % 3;

    // Grid the two shorter axes within a fixed capsule budget, minimizing the
    // larger half-spacing so the cover hugs thin boxes.
    constexpr int kBudget = 16;
    int nu = 1, nv = 1;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 1; a <= kBudget; ++a) {
        const int b = kBudget / a;
        const double s = std::max(he[u] / a, he[v] / b);
        if (s < best) {
            best = s;
            nu = a;
            nv = b;
        }
    }
    const double su = he[u] / nu, sv = he[v] / nv;
    const double radius = std::sqrt(su * su + sv * sv);

    std::vector<Capsule> cover;
    cover.reserve(static_cast<size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            Capsule c;
            c.p0 = c.p1 = Eigen::Vector3d::Zero();
            c.p0[k] = -he[k];
            c.p1[k] = he[k];
            c.p0[u] = c.p1[u] = -he[u] + (2 * i + 1) * su;
            c.p0[v] = c.p1[v] = -he[v] + (2 * j + 1) * sv;
            c.radius = radius;
            cover.push_back(c);
        }
    }
    return cover;
}

SceneSnapshot::SceneSnapshot(uint64_t version, std::vector<CollisionBody> bodies)
    : version_(version), bodies_(std::move(bodies)) {
    for (const auto& body : bodies_) {
        std::visit(
            [&](const auto& s) {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, Sphere>) {
                    const Eigen::Vector3d c = body.pose.translation();
                    prepared_.push_back({c, c, s.radius});
                } else if constexpr (std::is_same_v<S, Capsule>) {
                    prepared_.push_back(to_world(s, body.pose));
                } else {
                    for (const Capsule& c : box_capsule_cover(s))
                        prepared_.push_back(to_world(c, body.pose));
                }
            },
            body.shape);
    }
}

double segment_segment_distance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                const Eigen::Vector3d& q0, const Eigen::Vector3d& q1) {
    Eigen::Vector3d c1, c2;
    return closest_pt_segment_segment(p0, p1, q0, q1, c1, c2);
}

double shape_distance(const Shape& a, const RigidTransform& pose_a,
                      const Shape& b, const RigidTransform& pose_b) {
    return std::visit(
        [&](const auto& sa, const auto& sb) -> double {
            using A = std::decay_t<decltype(sa)>;
            using B = std::decay_t<decltype(sb)>;
            if constexpr (std::is_same_v<A, Sphere> && std::is_same_v<B, Sphere>) {
                return sphere_sphere(sa, pose_a.translation(), sb, pose_b.translation());
            } else if constexpr (std::is_same_v<A, Sphere> && std::is_same_v<B, Capsule>) {
                return sphere_capsule(sa, pose_a.translation(), to_world(sb, pose_b));
            } else if constexpr (std::is_same_v<A, Capsule> && std::is_same_v<B, Sphere>) {
                return sphere_capsule(sb, pose_b.translation(), to_world(sa, pose_a));
            } else if constexpr (std::is_same_v<A, Capsule> && std::is_same_v<B, Capsule>) {
                return capsule_capsule(to_world(sa, pose_a), to_world(sb, pose_b));
            } else if constexpr (std::is_same_v<A, Sphere> && std::is_same_v<B, Box>) {
                return sphere_box(sa, pose_a.translation(), sb, pose_b);
            } else if constexpr (std::is_same_v<A, Box> && std::is_same_v<B, Sphere>) {
                return sphere_box(sb, pose_b.translation(), sa, pose_a);
            } else if constexpr (std::is_same_v<A, Capsule> && std::is_same_v<B, Box>) {
                return capsule_cover_distance(to_world(sa, pose_a), sb, pose_b);
            } else if constexpr (std::is_same_v<A, Box> && std::is_same_v<B, Capsule>) {
                return capsule_cover_distance(to_world(sb, pose_b), sa, pose_a);
            } else {
                double best = kInfiniteClearance;
                for (const Capsule& c : box_capsule_cover(sa))
                    best = std::min(best, capsule_cover_distance(to_world(c, pose_a), sb, pose_b));
                return best;
            }
        },
        a, b);
}

bool shapes_overlap(const Shape& a, const RigidTransform& pose_a,
                    const Shape& b, const RigidTransform& pose_b) {
    if (std::holds_alternative<Box>(a) && std::holds_alternative<Box>(b))
        return box_box_overlap(std::get<Box>(a), pose_a, std::get<Box>(b), pose_b);
    return shape_distance(a, pose_a, b, pose_b) <= 0.0;
}

namespace {

std::vector<WorldCapsule> posed_link_capsules(const RobotModel& model,
                                              const RobotCollisionModel& cmodel,
                                              const JointConfig& q) {
    const auto frames = forward_kinematics(model, q);
    std::vector<WorldCapsule> out;
    out.reserve(cmodel.capsules.size());
    for (const auto& lc : cmodel.capsules)
        out.push_back(to_world(lc.capsule, frames.at(lc.link)));
    return out;
}

}  // namespace

double min_clearance(const RobotModel& model, const RobotCollisionModel& cmodel,
                     const JointConfig& q, const SceneSnapshot& scene) {
    const auto caps = posed_link_capsules(model, cmodel, q);
    double best = kInfiniteClearance;
    for (const auto& cap : caps)
        for (const auto& prim : scene.prepared())
            best = std::min(best, capsule_capsule(cap, prim));
    for (size_t i = 0; i < caps.size(); ++i)
        for (size_t j = i + 1; j < caps.size(); ++j)
            if (!cmodel.pair_allowed(static_cast<int>(i), static_cast<int>(j)))
                best = std::min(best, capsule_capsule(caps[i], caps[j]));
    return best;
}

bool config_collides(const RobotModel& model, const RobotCollisionModel& cmodel,
                     const JointConfig& q, const SceneSnapshot& scene) {
    const auto caps = posed_link_capsules(model, cmodel, q);
    for (const auto& cap : caps)
        for (const auto& prim : scene.prepared())
            if (capsule_capsule(cap, prim) <= 0.0)
                return true;
    for (size_t i = 0; i < caps.size(); ++i)
        for (size_t j = i + 1; j < caps.size(); ++j)
            if (!cmodel.pair_allowed(static_cast<int>(i), static_cast<int>(j)) &&
                capsule_capsule(caps[i], caps[j]) <= 0.0)
                return true;
    return false;
}

bool motion_valid(const RobotModel& model, const RobotCollisionModel& cmodel,
                  const JointConfig& q_a, const JointConfig& q_b,
                  const SceneSnapshot& scene, double resolution) {
    const double dist = (q_b - q_a).cwiseAbs().maxCoeff();
    const int steps = std::max(1, static_cast<int>(std::ceil(dist / resolution)));
    for (int i = 0; i <= steps; ++i) {
        const double s = static_cast<double>(i) / steps;
        if (config_collides(model, cmodel, q_a + s * (q_b - q_a), scene))
            return false;
    }
    return true;
}

std::optional<size_t> first_invalid_via_point(const RobotModel& model,
                                              const RobotCollisionModel& cmodel,
                                              const std::vector<JointConfig>& path,
                                              size_t start_index, const SceneSnapshot& scene,
                                              double resolution) {
    for (size_t k = start_index; k < path.size(); ++k) {
        if (k == start_index) {
            if (config_collides(model, cmodel, path[k], scene))
                return k;
        } else if (!motion_valid(model, cmodel, path[k - 1], path[k], scene, resolution)) {
            return k;
        }
    }
    return std::nullopt;
}

}  // namespace armplan
