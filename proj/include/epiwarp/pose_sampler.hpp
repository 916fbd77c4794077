// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "epiwarp/camera.hpp"

namespace epiwarp {

// Spherical viewpoint sampler. Polar angle is elevation above the XY plane
// (so the range [-65, 75] spans below-equator to near-top views), azimuth
// rotates about +Z, and the camera looks at `look_at` with +Z world up.
struct PoseSamplerConfig {
  double radius_min = 3.0;
  double radius_max = 4.0;
  double fov_deg = 50.0;
  double polar_min_deg = -65.0;
  double polar_max_deg = 75.0;
  double azimuth_min_deg = 0.0;
  double azimuth_max_deg = 360.0;
  Eigen::Vector3d look_at = Eigen::Vector3d::Zero();
  int width = 512;
  int height = 512;
};

void validate(const PoseSamplerConfig& config);

// Deterministic camera-to-world pose looking from `position` toward `target`
// with +Z world as the up reference. When the look direction is parallel to
// the up vector the reference is nudged to keep the frame well defined.
Pose look_at_pose(const Eigen::Vector3d& position, const Eigen::Vector3d& target);

// Draws (radius, polar, azimuth) uniformly from the configured ranges and
// builds the camera. Pure function of (seed, config).
Camera sample_pose(std::uint64_t seed, const PoseSamplerConfig& config);

// Similarity transform produced by recenter_rescale: p' = scale * (p - center).
struct RecenterTransform {
  double scale = 1.0;
  Eigen::Vector3d center = Eigen::Vector3d::Zero();

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const { return scale * (p - center); }
  Eigen::Vector3d invert(const Eigen::Vector3d& p) const { return p / scale + center; }
};

struct RecenteredCloud {
  std::vector<Eigen::Vector3d> points;
  RecenterTransform transform;
};

// Recenters a point cloud on its bounding-box center and scales it by the
// reciprocal of the largest half-extent, so the result fits [-1, 1]^3 and
// touches the cube on the dominant axis. Scale-free depth maps go through
// this before splatting. Throws "degenerate_cloud" when all points coincide.
RecenteredCloud recenter_rescale(const std::vector<Eigen::Vector3d>& points);

}  // namespace epiwarp
