#pragma once

#include <vector>

#include "viewplan/world.hpp"

namespace viewplan {

struct CameraPose {
    Vec3 position;
    Vec3 aim;  // unit vector toward the gimbal target
};

// Gimbal policy: point at the centroid of actor positions at time t,
// taken at half body height. Throws std::domain_error when the camera
// coincides with the centroid.
CameraPose aim_at(const GridVertex& robot_vertex, const Scenario& scenario,
                  int t);

// True when the segment is blocked, either dipping below terrain on a
// traversed heightmap cell or passing through one of the boxes.
bool occlusion_test(const Vec3& from, const Vec3& to, const HeightMap& h,
                    const std::vector<ActorBox>& other_actors);

// Pixels-per-area deposited on the face, zero when the face centroid is
// out of frustum, back-facing, or occluded. Occlusion considers terrain
// and every actor other than the face's owner.
double face_pixel_density(const CameraPose& pose, const CameraIntrinsics& cam,
                          const FaceGeometry& face, const Scenario& scenario,
                          int t);

}  // namespace viewplan
