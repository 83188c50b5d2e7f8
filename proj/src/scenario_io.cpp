#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "viewplan/world.hpp"

namespace viewplan {

using nlohmann::json;

namespace {

void require_keys(const json& obj, const char* what,
                  std::initializer_list<const char*> keys) {
    if (!obj.is_object())
        throw std::invalid_argument(std::string(what) + " must be an object");
    for (const char* k : keys)
        if (!obj.contains(k))
            throw std::invalid_argument(std::string(what) + " missing key '" +
                                        k + "'");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : keys)
            if (it.key() == k) known = true;
        if (!known)
            throw std::invalid_argument(std::string(what) + " has unknown key '" +
                                        it.key() + "'");
    }
}

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

struct Waypoint {
    double x, y, yaw;
    int t;
};

// Per-timestep poses: hold before the first and after the last waypoint,
// linear in between (shortest arc for yaw).
std::vector<Pose2> interpolate_waypoints(const std::vector<Waypoint>& wps,
                                         int horizon) {
    std::vector<Pose2> poses(horizon + 1);
    for (int t = 0; t <= horizon; ++t) {
        if (t <= wps.front().t) {
            poses[t] = {wps.front().x, wps.front().y, wps.front().yaw};
            continue;
        }
        if (t >= wps.back().t) {
            poses[t] = {wps.back().x, wps.back().y, wps.back().yaw};
            continue;
        }
        size_t k = 0;
        while (wps[k + 1].t < t) ++k;
        const Waypoint& a = wps[k];
        const Waypoint& b = wps[k + 1];
        double u = static_cast<double>(t - a.t) / (b.t - a.t);
        double dyaw = wrap_angle(b.yaw - a.yaw);
        poses[t] = {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y),
                    wrap_angle(a.yaw + u * dyaw)};
    }
    return poses;
}

}  // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json doc = json::parse(text);
    require_keys(doc, "scenario",
                 {"heightmap", "motion", "horizon", "robots", "actors", "camera",
                  "discount", "seed"});

    const json& hm = doc["heightmap"];
    require_keys(hm, "heightmap",
                 {"width", "height", "cell_size", "elevation", "origin"});
    std::vector<double> elev = hm["elevation"].get<std::vector<double>>();
    HeightMap heightmap(hm["width"].get<int>(), hm["height"].get<int>(),
                        hm["cell_size"].get<double>(), std::move(elev),
                        {hm["origin"][0].get<double>(),
                         hm["origin"][1].get<double>()});

    const json& mo = doc["motion"];
    require_keys(mo, "motion",
                 {"max_step", "flight_altitude", "clearance", "connectivity"});
    MotionModel motion;
    motion.max_step = mo["max_step"].get<int>();
    motion.flight_altitude = mo["flight_altitude"].get<double>();
    motion.clearance = mo["clearance"].get<double>();
    std::string conn = mo["connectivity"].get<std::string>();
    if (conn == "4-connected")
        motion.connectivity = Connectivity::Four;
    else if (conn == "8-connected")
        motion.connectivity = Connectivity::Eight;
    else
        throw std::invalid_argument("connectivity must be 4-connected or "
                                    "8-connected");

    int horizon = doc["horizon"].get<int>();

    std::vector<Cell> robots;
    for (const json& r : doc["robots"]) {
        if (!r.is_array() || r.size() != 2)
            throw std::invalid_argument("robot start must be [x, y]");
        robots.push_back({r[0].get<int>(), r[1].get<int>()});
    }

    std::vector<ActorTrack> actors;
    for (const json& a : doc["actors"]) {
        require_keys(a, "actor", {"footprint", "body_height", "waypoints"});
        if (!a["footprint"].is_array() || a["footprint"].size() != 2)
            throw std::invalid_argument("actor footprint must be [w, d]");
        std::vector<Waypoint> wps;
        for (const json& w : a["waypoints"]) {
            if (!w.is_array() || w.size() != 4)
                throw std::invalid_argument("waypoint must be [x, y, yaw, t]");
            Waypoint wp{w[0].get<double>(), w[1].get<double>(),
                        w[2].get<double>(), w[3].get<int>()};
            if (wp.t < 0 || wp.t > horizon)
                throw std::invalid_argument("waypoint timestep out of range");
            if (!wps.empty() && wp.t <= wps.back().t)
                throw std::invalid_argument("waypoint timesteps must increase");
            wps.push_back(wp);
        }
        if (wps.empty())
            throw std::invalid_argument("actor needs at least one waypoint");
        actors.emplace_back(static_cast<int>(actors.size()),
                            a["footprint"][0].get<double>(),
                            a["footprint"][1].get<double>(),
                            a["body_height"].get<double>(),
                            interpolate_waypoints(wps, horizon));
    }

    const json& cam = doc["camera"];
    require_keys(cam, "camera", {"focal_px", "image_width", "image_height"});
    CameraIntrinsics camera{cam["focal_px"].get<double>(),
                            cam["image_width"].get<int>(),
                            cam["image_height"].get<int>()};

    Scenario s{std::move(heightmap), motion,           horizon,
               std::move(robots),    std::move(actors), camera,
               doc["discount"].get<double>(), doc["seed"].get<std::uint64_t>()};
    s.validate();
    return s;
}

std::string scenario_to_json_text(const Scenario& s) {
    json doc;
    doc["heightmap"] = {{"width", s.heightmap.width()},
                        {"height", s.heightmap.height()},
                        {"cell_size", s.heightmap.cell_size()},
                        {"elevation", s.heightmap.elevation_data()},
                        {"origin", {s.heightmap.origin().x, s.heightmap.origin().y}}};
    doc["motion"] = {
        {"max_step", s.motion.max_step},
        {"flight_altitude", s.motion.flight_altitude},
        {"clearance", s.motion.clearance},
        {"connectivity", s.motion.connectivity == Connectivity::Four
                             ? "4-connected"
                             : "8-connected"}};
    doc["horizon"] = s.horizon;
    json robots = json::array();
    for (const Cell& c : s.robot_starts) robots.push_back({c.x, c.y});
    doc["robots"] = robots;
    json actors = json::array();
    for (const ActorTrack& a : s.actors) {
        json wps = json::array();
        for (int t = 0; t < a.pose_count(); ++t) {
            const Pose2& p = a.pose_at(t);
            wps.push_back({p.x, p.y, p.yaw, t});
        }
        actors.push_back({{"footprint", {a.footprint_w(), a.footprint_d()}},
                          {"body_height", a.body_height()},
                          {"waypoints", wps}});
    }
    doc["actors"] = actors;
    doc["camera"] = {{"focal_px", s.camera.focal_px},
                     {"image_width", s.camera.image_width},
                     {"image_height", s.camera.image_height}};
    doc["discount"] = s.discount;
    doc["seed"] = s.seed;
    return doc.dump(2) + "\n";
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return scenario_from_json_text(text);
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    out << scenario_to_json_text(s);
}

}  // namespace viewplan
