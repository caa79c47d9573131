#include "armplan/scene_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace armplan {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

Eigen::Vector3d vec3(const json& j) {
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json to_json(const Eigen::Vector3d& v) {
    return json::array({v.x(), v.y(), v.z()});
}

JointConfig joint_config(const json& j) {
    JointConfig q(j.size());
    for (size_t i = 0; i < j.size(); ++i)
        q[static_cast<int>(i)] = j.at(i).get<double>();
    return q;
}

json to_json(const JointConfig& q) {
    json j = json::array();
    for (int i = 0; i < q.size(); ++i)
        j.push_back(q[i]);
    return j;
}

RigidTransform pose_from(const json& j) {
    RigidTransform t = RigidTransform::Identity();
    if (j.contains("xyz"))
        t.translation() = vec3(j.at("xyz"));
    if (j.contains("rpy")) {
        const Eigen::Vector3d rpy = vec3(j.at("rpy"));
        t.linear() = (Eigen::AngleAxisd(rpy.z(), Eigen::Vector3d::UnitZ()) *
                      Eigen::AngleAxisd(rpy.y(), Eigen::Vector3d::UnitY()) *
                      Eigen::AngleAxisd(rpy.x(), Eigen::Vector3d::UnitX()))
                         .toRotationMatrix();
    }
    return t;
}

json pose_to(const RigidTransform& t) {
    const Eigen::Vector3d rpy = t.linear().eulerAngles(2, 1, 0).reverse();
    return json{{"xyz", to_json(Eigen::Vector3d(t.translation()))}, {"rpy", to_json(rpy)}};
}

Shape shape_from(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "sphere")
        return Sphere{j.at("radius").get<double>()};
    if (type == "capsule")
        return Capsule{vec3(j.at("p0")), vec3(j.at("p1")), j.at("radius").get<double>()};
    if (type == "box")
        return Box{vec3(j.at("half_extents"))};
    throw std::runtime_error("unknown shape type: " + type);
}

json shape_to(const Shape& s) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Sphere>)
                return json{{"type", "sphere"}, {"radius", v.radius}};
            else if constexpr (std::is_same_v<T, Capsule>)
                return json{{"type", "capsule"}, {"p0", to_json(v.p0)}, {"p1", to_json(v.p1)},
                            {"radius", v.radius}};
            else
                return json{{"type", "box"}, {"half_extents", to_json(v.half_extents)}};
        },
        s);
}

BodyTag tag_from(const std::string& s) {
    if (s == "environment") return BodyTag::Environment;
    if (s == "user") return BodyTag::User;
    if (s == "workspace_sphere") return BodyTag::WorkspaceSphere;
    throw std::runtime_error("unknown body tag: " + s);
}

std::string tag_to(BodyTag t) {
    switch (t) {
        case BodyTag::Environment: return "environment";
        case BodyTag::User: return "user";
        case BodyTag::WorkspaceSphere: return "workspace_sphere";
    }
    return "environment";
}

}  // namespace

RobotDescription load_robot_description(const std::string& path) {
    const json j = read_json(path);
    RobotDescription desc;
    desc.model.name = j.value("name", "robot");

    for (const auto& jj : j.at("joints")) {
        DhJoint joint;
        joint.a = jj.at("a").get<double>();
        joint.alpha = jj.at("alpha").get<double>();
        joint.d = jj.at("d").get<double>();
        joint.theta_offset = jj.at("theta_offset").get<double>();
        joint.limit_min = jj.at("limit_min").get<double>();
        joint.limit_max = jj.at("limit_max").get<double>();
        joint.v_max = jj.at("v_max").get<double>();
        joint.a_max = jj.at("a_max").get<double>();
        if (!(joint.limit_min < joint.limit_max))
            throw std::runtime_error("robot description: joint limit_min must be < limit_max");
        if (!(joint.v_max > 0.0 && joint.a_max > 0.0))
            throw std::runtime_error("robot description: velocity/acceleration limits must be positive");
        desc.model.joints.push_back(joint);
    }

    desc.model.base_transform = RigidTransform::Identity();
    desc.model.base_transform.translation().z() = j.value("base_height_m", 0.75);

    for (const auto& jl : j.at("links")) {
        RobotCollisionModel::LinkCapsule lc;
        lc.link = jl.at("link").get<int>();
        lc.capsule = Capsule{vec3(jl.at("p0")), vec3(jl.at("p1")), jl.at("radius").get<double>()};
        if (lc.link < 0 || lc.link > desc.model.dof())
            throw std::runtime_error("robot description: capsule references unknown link frame");
        desc.cmodel.capsules.push_back(lc);
    }
    if (j.contains("allowed_pairs")) {
        for (const auto& jp : j.at("allowed_pairs"))
            desc.cmodel.allowed_pairs.insert({jp.at(0).get<int>(), jp.at(1).get<int>()});
    } else {
        // Consecutive capsules share an endpoint along the chain.
        for (size_t i = 0; i + 1 < desc.cmodel.capsules.size(); ++i)
            desc.cmodel.allowed_pairs.insert({static_cast<int>(i), static_cast<int>(i + 1)});
    }
    return desc;
}

std::vector<CollisionBody> load_scene(const std::string& path) {
    const json j = read_json(path);
    std::vector<CollisionBody> bodies;
    for (const auto& jb : j.at("bodies")) {
        CollisionBody body;
        body.id = jb.at("id").get<std::string>();
        body.tag = tag_from(jb.at("tag").get<std::string>());
        body.shape = shape_from(jb.at("shape"));
        body.pose = pose_from(jb.at("pose"));
        bodies.push_back(body);
    }
    return bodies;
}

void save_scene(const std::string& path, const std::vector<CollisionBody>& bodies) {
    json jbodies = json::array();
    for (const auto& b : bodies)
        jbodies.push_back(json{{"id", b.id},
                               {"tag", tag_to(b.tag)},
                               {"shape", shape_to(b.shape)},
                               {"pose", pose_to(b.pose)}});
    write_json(path, json{{"bodies", jbodies}});
}

std::vector<NamedQuery> load_queries(const std::string& path) {
    const json j = read_json(path);
    std::vector<NamedQuery> out;
    for (const auto& jq : j) {
        NamedQuery q;
        q.name = jq.at("name").get<std::string>();
        q.q_init = joint_config(jq.at("q_init"));
        q.q_goal = joint_config(jq.at("q_goal"));
        out.push_back(std::move(q));
    }
    return out;
}

std::map<std::string, JointConfig> load_named_configs(const std::string& path) {
    const json j = read_json(path);
    std::map<std::string, JointConfig> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[it.key()] = joint_config(it.value());
    return out;
}

void save_named_configs(const std::string& path,
                        const std::map<std::string, JointConfig>& configs) {
    json j = json::object();
    for (const auto& [name, q] : configs)
        j[name] = to_json(q);
    write_json(path, j);
}

PlanCache load_plan_cache(const std::string& path) {
    const json j = read_json(path);
    PlanCache cache;
    for (auto it = j.at("safe_positions").begin(); it != j.at("safe_positions").end(); ++it)
        cache.safe_positions[it.key()] = joint_config(it.value());
    for (const auto& je : j.at("entries")) {
        PlanCacheEntry entry;
        entry.init_pos_id = je.at("init_pos_id").get<std::string>();
        entry.goal_pos_id = je.at("goal_pos_id").get<std::string>();
        for (const auto& jv : je.at("via_points"))
            entry.plan.via_points.push_back(joint_config(jv));
        entry.plan.stats.via_point_count = entry.plan.via_points.size();
        cache.entries.push_back(std::move(entry));
    }
    return cache;
}

void save_plan_cache(const std::string& path, const PlanCache& cache) {
    json jpos = json::object();
    for (const auto& [name, q] : cache.safe_positions)
        jpos[name] = to_json(q);
    json jentries = json::array();
    for (const auto& e : cache.entries) {
        json jvias = json::array();
        for (const auto& q : e.plan.via_points)
            jvias.push_back(to_json(q));
        jentries.push_back(json{{"init_pos_id", e.init_pos_id},
                                {"goal_pos_id", e.goal_pos_id},
                                {"via_points", jvias}});
    }
    write_json(path, json{{"safe_positions", jpos}, {"entries", jentries}});
}

MotionScript load_motion_script(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    MotionScript script;
    std::string line;
    std::getline(in, line);  // header
    double prev_t = -std::numeric_limits<double>::infinity();
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ','))
            row.push_back(std::stod(cell));
        if (row.size() != 15)
            throw std::runtime_error("motion script: expected 15 columns, got " +
                                     std::to_string(row.size()));
        if (row[0] <= prev_t)
            throw std::runtime_error("motion script: keyframe times must be strictly increasing");
        prev_t = row[0];
        MannequinConfig cfg;
        for (int i = 0; i < 14; ++i)
            cfg.angles[i] = row[i + 1];
        script.keyframes.emplace_back(row[0], cfg);
    }
    if (script.keyframes.empty())
        throw std::runtime_error("motion script: needs at least one keyframe");
    return script;
}

void save_motion_script(const std::string& path, const MotionScript& script) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "t";
    for (int i = 1; i <= 14; ++i)
        out << ",j" << i;
    out << "\n";
    out.precision(17);
    for (const auto& [t, cfg] : script.keyframes) {
        out << t;
        for (int i = 0; i < 14; ++i)
            out << "," << cfg.angles[i];
        out << "\n";
    }
}

void write_execution_log_csv(const std::string& path, const ExecutionLog& log) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out.precision(17);
    size_t dof = 0;
    for (const auto& e : log.events)
        dof = std::max(dof, static_cast<size_t>(e.q.size()));
    out << "t,event,version";
    for (size_t i = 1; i <= dof; ++i)
        out << ",q" << i;
    out << "\n";
    for (const auto& e : log.events) {
        out << e.t << "," << exec_action_name(e.action) << "," << e.version;
        for (size_t i = 0; i < dof; ++i)
            out << "," << (static_cast<int>(i) < e.q.size() ? e.q[static_cast<int>(i)] : 0.0);
        out << "\n";
    }
}

void write_trajectory_log_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out.precision(17);
    const int dof = static_cast<int>(traj.first().size());
    out << "t";
    for (int i = 1; i <= dof; ++i)
        out << ",q" << i;
    for (int i = 1; i <= dof; ++i)
        out << ",v" << i;
    out << "\n";
    const double dt = 0.01;
    for (double t = 0.0;; t += dt) {
        const double tc = std::min(t, traj.total_duration);
        const auto s = sample_at(traj, tc);
        out << tc;
        for (int i = 0; i < dof; ++i)
            out << "," << s.q[i];
        for (int i = 0; i < dof; ++i)
            out << "," << s.qdot[i];
        out << "\n";
        if (tc >= traj.total_duration)
            break;
    }
}

}  // namespace armplan
