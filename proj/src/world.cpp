#include "viewplan/world.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace viewplan {

HeightMap::HeightMap(int width, int height, double cell_size,
                     std::vector<double> elevation, Vec2 origin)
    : width_(width),
      height_(height),
      cell_size_(cell_size),
      origin_(origin),
      elev_(std::move(elevation)) {
    if (width_ < 1 || height_ < 1)
        throw std::invalid_argument("heightmap dimensions must be >= 1");
    if (!(cell_size_ > 0.0))
        throw std::invalid_argument("heightmap cell_size must be > 0");
    if (elev_.size() != static_cast<size_t>(width_) * height_)
        throw std::invalid_argument("heightmap elevation size mismatch");
    for (double e : elev_)
        if (!std::isfinite(e))
            throw std::invalid_argument("heightmap elevation must be finite");
}

double HeightMap::elevation(int x, int y) const {
    if (!in_bounds(x, y))
        throw std::out_of_range("heightmap cell out of bounds");
    return elev_[static_cast<size_t>(y) * width_ + x];
}

Cell HeightMap::cell_at(const Vec2& p) const {
    int cx = static_cast<int>(std::floor((p.x - origin_.x) / cell_size_));
    int cy = static_cast<int>(std::floor((p.y - origin_.y) / cell_size_));
    cx = std::clamp(cx, 0, width_ - 1);
    cy = std::clamp(cy, 0, height_ - 1);
    return {cx, cy};
}

bool HeightMap::contains_point(const Vec2& p) const {
    return p.x >= origin_.x && p.x <= origin_.x + width_ * cell_size_ &&
           p.y >= origin_.y && p.y <= origin_.y + height_ * cell_size_;
}

ActorTrack::ActorTrack(int id, double footprint_w, double footprint_d,
                       double body_height, std::vector<Pose2> poses)
    : id_(id),
      footprint_w_(footprint_w),
      footprint_d_(footprint_d),
      body_height_(body_height),
      poses_(std::move(poses)) {
    if (!(footprint_w_ > 0.0) || !(footprint_d_ > 0.0))
        throw std::invalid_argument("actor footprint must be positive");
    if (!(body_height_ > 0.0))
        throw std::invalid_argument("actor body_height must be positive");
    if (poses_.empty())
        throw std::invalid_argument("actor needs at least one pose");
}

const Pose2& ActorTrack::pose_at(int t) const {
    if (t < 0 || t >= static_cast<int>(poses_.size()))
        throw std::out_of_range("actor pose timestep out of range");
    return poses_[t];
}

std::array<FaceGeometry, 4> ActorTrack::faces_at(int t) const {
    const Pose2& p = pose_at(t);
    // Body-frame outward normals: +x, +y, -x, -y. The +/-x faces span the
    // depth side, the +/-y faces the width side.
    const std::array<Vec2, 4> axis = {
        Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, Vec2{-1.0, 0.0}, Vec2{0.0, -1.0}};
    const std::array<double, 4> offset = {footprint_w_ / 2.0, footprint_d_ / 2.0,
                                          footprint_w_ / 2.0, footprint_d_ / 2.0};
    const std::array<double, 4> span = {footprint_d_, footprint_w_,
                                        footprint_d_, footprint_w_};
    std::array<FaceGeometry, 4> faces;
    for (int k = 0; k < 4; ++k) {
        Vec2 n = rotate(axis[k], p.yaw);
        Vec2 c = Vec2{p.x, p.y} + n * offset[k];
        faces[k].center = {c.x, c.y, body_height_ / 2.0};
        faces[k].normal = {n.x, n.y, 0.0};
        faces[k].area = span[k] * body_height_;
        faces[k].actor = id_;
    }
    return faces;
}

ActorBox ActorTrack::box_at(int t) const {
    const Pose2& p = pose_at(t);
    return {{p.x, p.y}, footprint_w_ / 2.0, footprint_d_ / 2.0, body_height_,
            p.yaw};
}

GridVertex Scenario::start_vertex(int robot) const {
    const Cell& c = robot_starts.at(robot);
    return {c.x, c.y, 0};
}

void Scenario::validate() const {
    if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
    if (motion.max_step < 1)
        throw std::invalid_argument("max_step must be >= 1");
    if (!(motion.flight_altitude > motion.clearance) || motion.clearance < 0.0)
        throw std::invalid_argument("need flight_altitude > clearance >= 0");
    if (!(camera.focal_px > 0.0) || camera.image_width < 1 ||
        camera.image_height < 1)
        throw std::invalid_argument("bad camera intrinsics");
    if (!(discount > 0.0) || discount > 1.0)
        throw std::invalid_argument("discount must be in (0, 1]");

    std::set<std::pair<int, int>> seen;
    for (const Cell& c : robot_starts) {
        if (!heightmap.in_bounds(c.x, c.y))
            throw std::invalid_argument("robot start out of bounds");
        if (!traversable(c, heightmap, motion))
            throw std::invalid_argument("robot start not traversable");
        if (!seen.insert({c.x, c.y}).second)
            throw std::invalid_argument("robot starts must be distinct");
    }
    for (const ActorTrack& a : actors) {
        if (a.pose_count() != horizon + 1)
            throw std::invalid_argument("actor pose count must equal T+1");
        if (!(motion.flight_altitude > a.body_height()))
            throw std::invalid_argument(
                "flight altitude must exceed actor body height");
        for (const Pose2& p : a.poses())
            if (!heightmap.contains_point({p.x, p.y}))
                throw std::invalid_argument("actor pose outside heightmap");
    }
}

bool traversable(const Cell& c, const HeightMap& h, const MotionModel& m) {
    if (!h.in_bounds(c.x, c.y))
        throw std::out_of_range("vertex out of bounds");
    return h.elevation(c.x, c.y) + m.clearance <= m.flight_altitude;
}

bool traversable(const GridVertex& v, const HeightMap& h, const MotionModel& m) {
    return traversable(v.cell(), h, m);
}

std::vector<GridVertex> neighbors(const GridVertex& v, const MotionModel& m,
                                  const HeightMap& h, int horizon) {
    if (v.t >= horizon)
        throw std::out_of_range("no successors at the planning horizon");
    std::vector<GridVertex> out;
    const int r = m.max_step;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            int dist = m.connectivity == Connectivity::Eight
                           ? std::max(std::abs(dx), std::abs(dy))
                           : std::abs(dx) + std::abs(dy);
            if (dist > r) continue;
            Cell c{v.x + dx, v.y + dy};
            if (!h.in_bounds(c.x, c.y)) continue;
            if (!traversable(c, h, m)) continue;
            out.push_back({c.x, c.y, v.t + 1});
        }
    }
    return out;  // (y, x) order by construction
}

double step_length(const Cell& from, const Cell& to) {
    double dx = to.x - from.x, dy = to.y - from.y;
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace viewplan
