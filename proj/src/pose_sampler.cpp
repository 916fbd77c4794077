// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/pose_sampler.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "epiwarp/rng.hpp"

namespace epiwarp {

namespace {
constexpr double kDegToRad = std::numbers::pi / 180.0;
}

void validate(const PoseSamplerConfig& config) {
  check_domain(config.radius_min <= config.radius_max && config.radius_min > 0.0,
               "radius range must satisfy 0 < min <= max");
  check_domain(config.polar_min_deg <= config.polar_max_deg, "polar range must satisfy min <= max");
  check_domain(config.azimuth_min_deg <= config.azimuth_max_deg,
               "azimuth range must satisfy min <= max");
  check_domain(config.fov_deg > 0.0 && config.fov_deg < 180.0, "fov must be in (0, 180) degrees");
  check_domain(config.width > 0 && config.height > 0, "resolution must be positive");
}

Pose look_at_pose(const Eigen::Vector3d& position, const Eigen::Vector3d& target) {
  Eigen::Vector3d forward = target - position;
  const double len = forward.norm();
  if (!(len > 0.0)) throw_domain("look-at target coincides with the camera position");
  forward /= len;

  Eigen::Vector3d up(0.0, 0.0, 1.0);
  if (forward.cross(up).norm() < 1e-9) {
    // Looking straight along +-Z; perturb the up reference so the frame
    // stays well defined. The perturbation is fixed, keeping this pure.
    up = Eigen::Vector3d(1e-3, 0.0, 1.0).normalized();
  }

  // Right-handed camera frame with +X right, +Y down, +Z forward.
  const Eigen::Vector3d right = forward.cross(up).normalized();
  const Eigen::Vector3d down = forward.cross(right);

  Pose pose;
  pose.rotation.col(0) = right;
  pose.rotation.col(1) = down;
  pose.rotation.col(2) = forward;
  pose.translation = position;
  return pose;
}

Camera sample_pose(std::uint64_t seed, const PoseSamplerConfig& config) {
  validate(config);
  Rng rng = Rng(seed).stream("pose-sampler");
  const double radius = rng.uniform(config.radius_min, config.radius_max);
  const double polar = rng.uniform(config.polar_min_deg, config.polar_max_deg) * kDegToRad;
  const double azimuth = rng.uniform(config.azimuth_min_deg, config.azimuth_max_deg) * kDegToRad;

  const Eigen::Vector3d offset(radius * std::cos(polar) * std::cos(azimuth),
                               radius * std::cos(polar) * std::sin(azimuth),
                               radius * std::sin(polar));

  Camera camera;
  camera.width = config.width;
  camera.height = config.height;
  camera.intrinsics = fov_to_intrinsics(config.fov_deg, config.width, config.height);
  camera.pose = look_at_pose(config.look_at + offset, config.look_at);
  return camera;
}

RecenteredCloud recenter_rescale(const std::vector<Eigen::Vector3d>& points) {
  check_domain(!points.empty(), "recenter_rescale requires a nonempty point list");

  Eigen::Vector3d lo = points.front();
  Eigen::Vector3d hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector3d half = (hi - lo) * 0.5;
  const double max_half = half.maxCoeff();
  if (!(max_half > 0.0)) throw Error("degenerate_cloud", "all points coincide; cannot rescale");

  RecenteredCloud result;
  result.transform.center = (lo + hi) * 0.5;
  result.transform.scale = 1.0 / max_half;
  result.points.reserve(points.size());
  for (const auto& p : points) result.points.push_back(result.transform.apply(p));
  return result;
}

}  // namespace epiwarp
