#include "viewplan/camera.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace viewplan {

namespace {

constexpr double kEps = 1e-12;

struct CameraBasis {
    Vec3 forward, right, up;
};

CameraBasis make_basis(const Vec3& aim) {
    CameraBasis b;
    b.forward = aim;
    Vec3 world_up{0.0, 0.0, 1.0};
    Vec3 r = b.forward.cross(world_up);
    if (r.norm() < kEps) r = {1.0, 0.0, 0.0};  // looking straight up/down
    b.right = r.normalized();
    b.up = b.right.cross(b.forward);
    return b;
}

// Segment-vs-upright-box intersection via a slab test in the box frame.
bool segment_hits_box(const Vec3& from, const Vec3& to, const ActorBox& box) {
    Vec2 p0 = rotate({from.x - box.center.x, from.y - box.center.y}, -box.yaw);
    Vec2 p1 = rotate({to.x - box.center.x, to.y - box.center.y}, -box.yaw);
    double o[3] = {p0.x, p0.y, from.z};
    double d[3] = {p1.x - p0.x, p1.y - p0.y, to.z - from.z};
    double lo[3] = {-box.half_w, -box.half_d, 0.0};
    double hi[3] = {box.half_w, box.half_d, box.height};

    double tmin = 0.0, tmax = 1.0;
    for (int k = 0; k < 3; ++k) {
        if (std::abs(d[k]) < kEps) {
            if (o[k] < lo[k] || o[k] > hi[k]) return false;
            continue;
        }
        double t0 = (lo[k] - o[k]) / d[k];
        double t1 = (hi[k] - o[k]) / d[k];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return false;
    }
    return true;
}

}  // namespace

CameraPose aim_at(const GridVertex& robot_vertex, const Scenario& scenario,
                  int t) {
    if (scenario.actors.empty())
        throw std::invalid_argument("aim_at needs at least one actor");
    Vec3 centroid{0.0, 0.0, 0.0};
    for (const ActorTrack& a : scenario.actors) {
        const Pose2& p = a.pose_at(t);
        centroid = centroid + Vec3{p.x, p.y, a.body_height() / 2.0};
    }
    centroid = centroid * (1.0 / scenario.actors.size());

    Vec2 c = scenario.heightmap.cell_center(robot_vertex.cell());
    Vec3 position{c.x, c.y, scenario.motion.flight_altitude};
    Vec3 offset = centroid - position;
    if (offset.norm() < kEps)
        throw std::domain_error("camera coincides with actor centroid");
    return {position, offset.normalized()};
}

bool occlusion_test(const Vec3& from, const Vec3& to, const HeightMap& h,
                    const std::vector<ActorBox>& other_actors) {
    for (const ActorBox& box : other_actors)
        if (segment_hits_box(from, to, box)) return true;

    // 2D DDA over heightmap cells. For each traversed cell the segment
    // height is linear, so the minimum over the cell is attained at the
    // entry or exit parameter; blocked iff that minimum dips below the
    // cell elevation.
    const double cs = h.cell_size();
    double gx0 = (from.x - h.origin().x) / cs;
    double gy0 = (from.y - h.origin().y) / cs;
    double gx1 = (to.x - h.origin().x) / cs;
    double gy1 = (to.y - h.origin().y) / cs;
    double dgx = gx1 - gx0, dgy = gy1 - gy0;

    auto clamp_idx = [](double g, int n) {
        return std::clamp(static_cast<int>(std::floor(g)), 0, n - 1);
    };
    int cx = clamp_idx(gx0, h.width());
    int cy = clamp_idx(gy0, h.height());
    const int ex = clamp_idx(gx1, h.width());
    const int ey = clamp_idx(gy1, h.height());

    int step_x = dgx > 0 ? 1 : -1;
    int step_y = dgy > 0 ? 1 : -1;
    double t_dx = std::abs(dgx) < kEps ? HUGE_VAL : 1.0 / std::abs(dgx);
    double t_dy = std::abs(dgy) < kEps ? HUGE_VAL : 1.0 / std::abs(dgy);
    double t_max_x =
        std::abs(dgx) < kEps
            ? HUGE_VAL
            : ((step_x > 0 ? (cx + 1 - gx0) : (gx0 - cx)) / std::abs(dgx));
    double t_max_y =
        std::abs(dgy) < kEps
            ? HUGE_VAL
            : ((step_y > 0 ? (cy + 1 - gy0) : (gy0 - cy)) / std::abs(dgy));

    double t_enter = 0.0;
    const double dz = to.z - from.z;
    const int max_cells = 2 * (h.width() + h.height()) + 4;
    for (int guard = 0; guard < max_cells; ++guard) {
        double t_exit = std::min({t_max_x, t_max_y, 1.0});
        double z_lo = from.z + dz * (dz >= 0 ? t_enter : t_exit);
        if (z_lo < h.elevation(cx, cy)) return true;
        if ((cx == ex && cy == ey) || t_exit >= 1.0) break;
        if (t_max_x < t_max_y) {
            t_enter = t_max_x;
            t_max_x += t_dx;
            cx += step_x;
        } else {
            t_enter = t_max_y;
            t_max_y += t_dy;
            cy += step_y;
        }
        cx = std::clamp(cx, 0, h.width() - 1);
        cy = std::clamp(cy, 0, h.height() - 1);
    }
    return false;
}

double face_pixel_density(const CameraPose& pose, const CameraIntrinsics& cam,
                          const FaceGeometry& face, const Scenario& scenario,
                          int t) {
    Vec3 ray = face.center - pose.position;
    double d = ray.norm();
    if (d < kEps) throw std::domain_error("camera coincides with face centroid");
    Vec3 r_hat = ray * (1.0 / d);

    // Frustum gate on the face centroid.
    CameraBasis basis = make_basis(pose.aim);
    double depth = ray.dot(basis.forward);
    if (depth <= 0.0) return 0.0;
    double u = ray.dot(basis.right) / depth;
    double v = ray.dot(basis.up) / depth;
    if (std::abs(u) > cam.image_width / (2.0 * cam.focal_px)) return 0.0;
    if (std::abs(v) > cam.image_height / (2.0 * cam.focal_px)) return 0.0;

    double cos_theta = std::max(0.0, -face.normal.dot(r_hat));
    if (cos_theta <= 0.0) return 0.0;

    std::vector<ActorBox> others;
    others.reserve(scenario.actors.size());
    for (const ActorTrack& a : scenario.actors)
        if (a.id() != face.actor) others.push_back(a.box_at(t));
    if (occlusion_test(pose.position, face.center, scenario.heightmap, others))
        return 0.0;

    return cam.focal_px * cam.focal_px * cos_theta / (d * d);
}

}  // namespace viewplan
