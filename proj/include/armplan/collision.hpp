#pragma once

#include "armplan/kinematics.hpp"

#include <limits>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace armplan {

struct Sphere {
    double radius = 0.0;
};

// Segment endpoints are in the body frame.
struct Capsule {
    Eigen::Vector3d p0 = Eigen::Vector3d::Zero();
    Eigen::Vector3d p1 = Eigen::Vector3d::Zero();
    double radius = 0.0;
};

struct Box {
    Eigen::Vector3d half_extents = Eigen::Vector3d::Zero();
};

using Shape = std::variant<Sphere, Capsule, Box>;

enum class BodyTag { Environment, User, WorkspaceSphere };

struct CollisionBody {
    std::string id;
    Shape shape;
    RigidTransform pose = RigidTransform::Identity();
    BodyTag tag = BodyTag::Environment;
};

// World-space capsule (spheres are zero-length capsules); the form every
// scene body is reduced to for robot distance queries.
struct WorldCapsule {
    Eigen::Vector3d p0, p1;
    double radius;
};

// Conservative cover of a box by a budgeted grid of capsules spanning its
// longest axis; the union contains the box, so distances to the cover are
// lower bounds on distances to the box.
std::vector<Capsule> box_capsule_cover(const Box& box);

// Immutable once constructed; a higher version strictly means newer.
class SceneSnapshot {
public:
    SceneSnapshot() = default;
    SceneSnapshot(uint64_t version, std::vector<CollisionBody> bodies);

    uint64_t version() const { return version_; }
    const std::vector<CollisionBody>& bodies() const { return bodies_; }

    // Prepared world-space primitives, one or more per body.
    const std::vector<WorldCapsule>& prepared() const { return prepared_; }

private:
    uint64_t version_ = 0;
    std::vector<CollisionBody> bodies_;
    std::vector<WorldCapsule> prepared_;
};

struct RobotCollisionModel {
    struct LinkCapsule {
        int link = 0;  // frame index from forward_kinematics
        Capsule capsule;
    };
    std::vector<LinkCapsule> capsules;
    // Pairs of capsule indices exempt from self-collision checks.
    std::set<std::pair<int, int>> allowed_pairs;

    bool pair_allowed(int i, int j) const {
        if (i > j) std::swap(i, j);
        return allowed_pairs.count({i, j}) > 0;
    }
};

constexpr double kInfiniteClearance = std::numeric_limits<double>::infinity();

double segment_segment_distance(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                const Eigen::Vector3d& q0, const Eigen::Vector3d& q1);

// Signed clearance between two posed shapes. Exact for sphere/capsule pairs
// and sphere-box; pairs involving a box vs capsule or another box use the
// capsule cover and return a conservative lower bound.
double shape_distance(const Shape& a, const RigidTransform& pose_a,
                      const Shape& b, const RigidTransform& pose_b);

// Boolean overlap. Box-box uses an exact separating-axis test; everything
// else reduces to shape_distance <= 0.
bool shapes_overlap(const Shape& a, const RigidTransform& pose_a,
                    const Shape& b, const RigidTransform& pose_b);

bool config_collides(const RobotModel& model, const RobotCollisionModel& cmodel,
                     const JointConfig& q, const SceneSnapshot& scene);

bool motion_valid(const RobotModel& model, const RobotCollisionModel& cmodel,
                  const JointConfig& q_a, const JointConfig& q_b,
                  const SceneSnapshot& scene, double resolution);

// Smallest index >= start_index whose configuration, or the segment leading
// into it, is invalid under the snapshot.
std::optional<size_t> first_invalid_via_point(const RobotModel& model,
                                              const RobotCollisionModel& cmodel,
                                              const std::vector<JointConfig>& path,
                                              size_t start_index, const SceneSnapshot& scene,
                                              double resolution);

double min_clearance(const RobotModel& model, const RobotCollisionModel& cmodel,
                     const JointConfig& q, const SceneSnapshot& scene);

constexpr double kDefaultValidityResolution = 0.01;  // [rad]

}  // namespace armplan
