#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "viewplan/geometry.hpp"

namespace viewplan {

struct Cell {
    int x = 0;
    int y = 0;

    bool operator==(const Cell& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Cell& o) const { return !(*this == o); }
    bool operator<(const Cell& o) const {
        return y != o.y ? y < o.y : x < o.x;
    }
};

// A graph vertex: grid cell plus the timestep it is occupied at.
struct GridVertex {
    int x = 0;
    int y = 0;
    int t = 0;

    Cell cell() const { return {x, y}; }
    bool operator==(const GridVertex& o) const {
        return x == o.x && y == o.y && t == o.t;
    }
};

// One robot's time-indexed cell sequence; index = timestep, length T+1.
using Trajectory = std::vector<Cell>;

// 2.5D terrain: one elevation sample per cell, row-major.
class HeightMap {
public:
    HeightMap(int width, int height, double cell_size,
              std::vector<double> elevation, Vec2 origin = {0.0, 0.0});

    int width() const { return width_; }
    int height() const { return height_; }
    double cell_size() const { return cell_size_; }
    const Vec2& origin() const { return origin_; }
    const std::vector<double>& elevation_data() const { return elev_; }

    bool in_bounds(int x, int y) const {
        return x >= 0 && x < width_ && y >= 0 && y < height_;
    }
    double elevation(int x, int y) const;
    double elevation(const Cell& c) const { return elevation(c.x, c.y); }

    // World-frame center of a cell.
    Vec2 cell_center(int x, int y) const {
        return {origin_.x + (x + 0.5) * cell_size_,
                origin_.y + (y + 0.5) * cell_size_};
    }
    Vec2 cell_center(const Cell& c) const { return cell_center(c.x, c.y); }

    // Cell containing a world point, clamped to the grid at the boundary.
    Cell cell_at(const Vec2& p) const;
    bool contains_point(const Vec2& p) const;

private:
    int width_;
    int height_;
    double cell_size_;
    Vec2 origin_;
    std::vector<double> elev_;
};

enum class Connectivity { Four, Eight };

struct MotionModel {
    int max_step = 1;               // cells per timestep
    double flight_altitude = 10.0;  // meters
    double clearance = 2.0;         // meters kept above terrain
    Connectivity connectivity = Connectivity::Eight;
};

struct Pose2 {
    double x = 0.0;
    double y = 0.0;
    double yaw = 0.0;
};

// One vertical side face of an actor cuboid at a given timestep.
struct FaceGeometry {
    Vec3 center;
    Vec3 normal;  // outward, unit-length, horizontal
    double area = 0.0;
    int actor = -1;
};

// Upright box with yaw, used for ray occlusion tests between actors.
struct ActorBox {
    Vec2 center;
    double half_w = 0.0;
    double half_d = 0.0;
    double height = 0.0;
    double yaw = 0.0;
};

class ActorTrack {
public:
    ActorTrack(int id, double footprint_w, double footprint_d,
               double body_height, std::vector<Pose2> poses);

    int id() const { return id_; }
    double footprint_w() const { return footprint_w_; }
    double footprint_d() const { return footprint_d_; }
    double body_height() const { return body_height_; }
    int pose_count() const { return static_cast<int>(poses_.size()); }
    const std::vector<Pose2>& poses() const { return poses_; }

    const Pose2& pose_at(int t) const;
    std::array<FaceGeometry, 4> faces_at(int t) const;
    ActorBox box_at(int t) const;

private:
    int id_;
    double footprint_w_;
    double footprint_d_;
    double body_height_;
    std::vector<Pose2> poses_;  // length T+1
};

struct CameraIntrinsics {
    double focal_px = 400.0;
    int image_width = 640;
    int image_height = 480;

    double hfov() const {
        return 2.0 * std::atan(image_width / (2.0 * focal_px));
    }
    double vfov() const {
        return 2.0 * std::atan(image_height / (2.0 * focal_px));
    }
};

struct Scenario {
    HeightMap heightmap;
    MotionModel motion;
    int horizon = 0;  // T
    std::vector<Cell> robot_starts;
    std::vector<ActorTrack> actors;
    CameraIntrinsics camera;
    double discount = 0.95;
    std::uint64_t seed = 0;

    int num_robots() const { return static_cast<int>(robot_starts.size()); }
    int num_actors() const { return static_cast<int>(actors.size()); }
    GridVertex start_vertex(int robot) const;

    // Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

// True iff a robot can occupy the cell: terrain plus clearance stays
// below the flight altitude. Throws std::out_of_range off the map.
bool traversable(const GridVertex& v, const HeightMap& h, const MotionModel& m);
bool traversable(const Cell& c, const HeightMap& h, const MotionModel& m);

// Successor vertices at t+1 under the motion model (includes wait),
// sorted by (y, x). Throws std::out_of_range when v.t == horizon.
std::vector<GridVertex> neighbors(const GridVertex& v, const MotionModel& m,
                                  const HeightMap& h, int horizon);

// Euclidean length in cells of the step between consecutive cells.
double step_length(const Cell& from, const Cell& to);

// Scenario file I/O (JSON). Unknown keys are rejected.
Scenario load_scenario(const std::string& path);
Scenario scenario_from_json_text(const std::string& text);
std::string scenario_to_json_text(const Scenario& s);
void save_scenario(const Scenario& s, const std::string& path);

}  // namespace viewplan
