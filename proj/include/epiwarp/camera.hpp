// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <filesystem>

#include "epiwarp/error.hpp"

namespace epiwarp {

// Camera-frame convention used throughout: +Z forward, +X right, +Y down.
// Pixel (u, v) addresses the pixel center, origin at the top-left corner,
// so integer coordinates are exactly the sample positions of the image grid.

// Threshold below which a camera-frame depth counts as "behind the camera";
// guards the perspective divide.
inline constexpr double kBehindCameraEps = 1e-6;

struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d k;
    k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return k;
  }
};

// Camera-to-world transform: world = R * camera + T. T is the camera center
// in world coordinates.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d to_world(const Eigen::Vector3d& camera_point) const {
    return rotation * camera_point + translation;
  }
  Eigen::Vector3d to_camera(const Eigen::Vector3d& world_point) const {
    return rotation.transpose() * (world_point - translation);
  }
};

struct Camera {
  Intrinsics intrinsics;
  Pose pose;
  int width = 0;
  int height = 0;

  Eigen::Vector3d center() const { return pose.translation; }
};

bool is_rotation(const Eigen::Matrix3d& r, double tol = 1e-6);

// Throws on invariant violations (non-orthonormal rotation, bad resolution,
// principal point outside the image).
void validate(const Pose& pose);
void validate(const Camera& camera);

// Square-pixel intrinsics from a horizontal field of view.
// fx = fy = (w/2) / tan(fov/2), principal point at the image center.
Intrinsics fov_to_intrinsics(double fov_deg, int width, int height);

// Lifts a pixel with known camera-Z depth into world space:
// p_w = R * (d * K^-1 * [u, v, 1]^T) + T.
Eigen::Vector3d unproject(const Eigen::Vector2d& pixel, double depth, const Camera& camera);

struct Projection {
  Eigen::Vector2d pixel;
  double depth = 0.0;  // camera-frame Z of the projected point
};

// Perspective projection; false when the point is at or behind the camera
// plane (depth <= kBehindCameraEps) or not finite.
bool try_project(const Eigen::Vector3d& world_point, const Camera& camera, Projection& out);

// Throwing variant of try_project ("behind_camera" error code).
Projection project(const Eigen::Vector3d& world_point, const Camera& camera);

// Pose mapping source-camera coordinates into target-camera coordinates:
// R_rel = R_t^T * R_s, T_rel = R_t^T * (T_s - T_t).
Pose relative_transform(const Pose& source, const Pose& target);

// Composition as transforms: result(x) = outer(inner(x)).
Pose compose(const Pose& outer, const Pose& inner);

// Camera JSON schema (field names are part of the on-disk contract):
// {"intrinsics":{"fx","fy","cx","cy"},"pose":{"R":[9 row-major],"T":[3]},
//  "resolution":[w,h]}  with pose stored camera-to-world.
Camera load_camera_json(const std::filesystem::path& path);
void save_camera_json(const std::filesystem::path& path, const Camera& camera);
std::string camera_to_json_string(const Camera& camera);
Camera camera_from_json_string(const std::string& text);

}  // namespace epiwarp
