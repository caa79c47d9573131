#pragma once

#include "armplan/planners.hpp"
#include "armplan/scene_io.hpp"

#include <string>
#include <vector>

namespace armplan::test {

inline std::string data_path(const std::string& file) {
    return std::string(ARMPLAN_DATA_DIR) + "/" + file;
}

inline RobotDescription& bundled_robot() {
    static RobotDescription desc = load_robot_description(data_path("ur5.json"));
    return desc;
}

inline JointConfig q2(double x, double y) {
    JointConfig q(2);
    q << x, y;
    return q;
}

// 2-D point world with circular obstacles on [0,10]^2.
struct Disc {
    double cx, cy, r;
};

inline ConfigSpace disc_space(std::vector<Disc> discs, double resolution = 0.02) {
    ConfigSpace space;
    space.lower = Eigen::Vector2d(0.0, 0.0);
    space.upper = Eigen::Vector2d(10.0, 10.0);
    auto blocked = [discs](const JointConfig& q) {
        for (const auto& d : discs) {
            const double dx = q[0] - d.cx, dy = q[1] - d.cy;
            if (dx * dx + dy * dy <= d.r * d.r)
                return true;
        }
        return false;
    };
    space.valid = [lower = space.lower, upper = space.upper, blocked](const JointConfig& q) {
        for (int i = 0; i < 2; ++i)
            if (q[i] < lower[i] || q[i] > upper[i])
                return false;
        return !blocked(q);
    };
    space.motion = [valid = space.valid, resolution](const JointConfig& a, const JointConfig& b) {
        const double dist = ConfigSpace::distance(a, b);
        const int steps = std::max(1, static_cast<int>(std::ceil(dist / resolution)));
        for (int i = 0; i <= steps; ++i)
            if (!valid(a + (static_cast<double>(i) / steps) * (b - a)))
                return false;
        return true;
    };
    space.clearance = [discs](const JointConfig& q) {
        double best = kInfiniteClearance;
        for (const auto& d : discs) {
            const double dx = q[0] - d.cx, dy = q[1] - d.cy;
            best = std::min(best, std::sqrt(dx * dx + dy * dy) - d.r);
        }
        return best;
    };
    return space;
}

// Exhaustive 4-connected grid reachability at the given cell size; certifies
// feasibility/infeasibility of a 2-D instance independently of any planner.
inline bool grid_reachable(const ConfigSpace& space, const JointConfig& a, const JointConfig& b,
                           double cell = 0.05) {
    const int nx = static_cast<int>((space.upper[0] - space.lower[0]) / cell) + 1;
    const int ny = static_cast<int>((space.upper[1] - space.lower[1]) / cell) + 1;
    auto to_cell = [&](const JointConfig& q) {
        return std::pair<int, int>(static_cast<int>((q[0] - space.lower[0]) / cell),
                                   static_cast<int>((q[1] - space.lower[1]) / cell));
    };
    auto cell_free = [&](int i, int j) {
        JointConfig q(2);
        q << space.lower[0] + i * cell, space.lower[1] + j * cell;
        return space.valid(q);
    };
    const auto [si, sj] = to_cell(a);
    const auto [gi, gj] = to_cell(b);
    if (!cell_free(si, sj) || !cell_free(gi, gj))
        return false;
    std::vector<char> seen(static_cast<size_t>(nx) * ny, 0);
    std::vector<std::pair<int, int>> stack{{si, sj}};
    seen[static_cast<size_t>(si) * ny + sj] = 1;
    while (!stack.empty()) {
        const auto [i, j] = stack.back();
        stack.pop_back();
        if (i == gi && j == gj)
            return true;
        const int di[] = {1, -1, 0, 0}, dj[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int ni = i + di[k], nj = j + dj[k];
            if (ni < 0 || nj < 0 || ni >= nx || nj >= ny)
                continue;
            auto& mark = seen[static_cast<size_t>(ni) * ny + nj];
            if (mark || !cell_free(ni, nj))
                continue;
            mark = 1;
            stack.push_back({ni, nj});
        }
    }
    return false;
}

// A wall of discs fully separating left from right; grid-certified infeasible.
inline std::vector<Disc> wall_discs() {
    std::vector<Disc> discs;
    for (double y = -0.5; y <= 10.5; y += 0.5)
        discs.push_back({5.0, y, 0.45});
    return discs;
}

}  // namespace armplan::test
