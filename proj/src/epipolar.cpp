// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/epipolar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "epiwarp/parallel.hpp"

namespace epiwarp {

namespace {
constexpr double kCenterEps = 1e-12;
constexpr float kUntouched = std::numeric_limits<float>::infinity();
}  // namespace

double ray_angle(const Eigen::Vector3d& world_point, const Camera& src_cam,
                 const Camera& tgt_cam) {
  Eigen::Vector3d to_src = src_cam.center() - world_point;
  Eigen::Vector3d to_tgt = tgt_cam.center() - world_point;
  const double ns = to_src.norm();
  const double nt = to_tgt.norm();
  if (!(ns > kCenterEps) || !(nt > kCenterEps))
    throw_domain("ray_angle: point coincides with a camera center");
  to_src /= ns;
  to_tgt /= nt;
  const double angle = std::atan2(to_src.cross(to_tgt).norm(), to_src.dot(to_tgt));
  return angle * 180.0 / std::numbers::pi;
}

namespace {

// 1 - angle/180, guarded against points that collapse onto a camera center
// while marching (those samples carry no usable direction and are skipped).
bool shade_at(const Eigen::Vector3d& point, const Camera& src_cam, const Camera& tgt_cam,
              float& value) {
  Eigen::Vector3d to_src = src_cam.center() - point;
  Eigen::Vector3d to_tgt = tgt_cam.center() - point;
  const double ns = to_src.norm();
  const double nt = to_tgt.norm();
  if (!(ns > kCenterEps) || !(nt > kCenterEps)) return false;
  const double angle =
      std::atan2((to_src / ns).cross(to_tgt / nt).norm(), (to_src / ns).dot(to_tgt / nt));
  value = static_cast<float>(1.0 - angle / std::numbers::pi);
  return true;
}

}  // namespace

EpipolarMask epipolar_mask(const DepthImage& src_depth, const Camera& src_cam,
                           const Camera& tgt_cam, const SplatResult& splat,
                           const EpipolarMaskParams& params, int threads) {
  check_contract(src_depth.width == src_cam.width && src_depth.height == src_cam.height,
                 "epipolar_mask: depth does not match source camera resolution");
  check_contract(splat.color.width == tgt_cam.width && splat.color.height == tgt_cam.height,
                 "epipolar_mask: splat does not match target camera resolution");
  validate(src_cam);
  validate(tgt_cam);
  check_domain(params.step_scale > 0.0 && params.max_steps > 0, "invalid ray-march parameters");

  const int sw = src_depth.width, sh = src_depth.height;
  const int tw = tgt_cam.width, th = tgt_cam.height;

  // Unproject the source cloud once; also gives the scene scale that anchors
  // the occlusion tolerance.
  std::vector<Eigen::Vector3d> cloud(static_cast<size_t>(sw) * sh,
                                     Eigen::Vector3d::Constant(std::numeric_limits<double>::quiet_NaN()));
  parallel_for(0, sh, threads, [&](int y) {
    for (int x = 0; x < sw; ++x) {
      const float d = src_depth.at(x, y);
      if (!depth_valid(d)) continue;
      cloud[static_cast<size_t>(y) * sw + x] =
          unproject(Eigen::Vector2d(x, y), static_cast<double>(d), src_cam);
    }
  });

  Eigen::Vector3d lo = Eigen::Vector3d::Constant(std::numeric_limits<double>::max());
  Eigen::Vector3d hi = Eigen::Vector3d::Constant(std::numeric_limits<double>::lowest());
  bool any_valid = false;
  for (const auto& p : cloud) {
    if (!p.allFinite()) continue;
    any_valid = true;
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  EpipolarMask mask(tw, th, 0.0f);
  if (!any_valid) return mask;

  const double scene_scale = std::max((hi - lo).maxCoeff(), 1e-12);
  const double delta_occ = params.occlusion_delta_scale * scene_scale;
  const double focal = std::max(tgt_cam.intrinsics.fx, tgt_cam.intrinsics.fy);
  const Eigen::Vector3d src_center = src_cam.center();

  // Free space can never hide behind target-visible geometry; uncovered
  // target pixels have no geometry, so anything projecting there passes.
  auto depth_limit = [&](int tx, int ty) {
    return splat.covered(tx, ty) ? static_cast<double>(splat.depth.at(tx, ty)) + delta_occ
                                 : std::numeric_limits<double>::max();
  };

  auto mark = [&](GrayImage& buffer, int tx, int ty, float value) {
    float& cell = buffer.at(tx, ty);
    cell = std::min(cell, value);
  };

  // Per-worker buffers merged by exact min afterwards, so the band-to-worker
  // assignment cannot affect the result.
  const int max_workers = std::max(1, std::min(threads, sh));
  std::vector<GrayImage> buffers(static_cast<size_t>(max_workers));
  for (auto& b : buffers) b = GrayImage(tw, th, kUntouched);

  parallel_for_slots(0, sh, threads, [&](int y, int slot) {
    GrayImage& buffer = buffers[static_cast<size_t>(slot)];
    for (int x = 0; x < sw; ++x) {
      const Eigen::Vector3d& surface = cloud[static_cast<size_t>(y) * sw + x];
      if (!surface.allFinite()) continue;

      const Eigen::Vector3d ray = surface - src_center;
      const double length = ray.norm();
      if (!(length > 0.0)) continue;

      // Step from the target-pixel footprint at the surface depth; fall back
      // to the scene scale when the surface sits behind the target camera.
      Projection surf_proj;
      const bool surf_visible = try_project(surface, tgt_cam, surf_proj);
      const double ref_depth = surf_visible ? surf_proj.depth : scene_scale;
      const double step = params.step_scale * ref_depth / focal;
      const int steps = static_cast<int>(
          std::clamp(std::ceil(length / std::max(step, 1e-12)), 1.0, double(params.max_steps)));

      for (int i = 0; i < steps; ++i) {
        const double s = (i + 0.5) / steps;
        const Eigen::Vector3d q = src_center + s * ray;
        Projection proj;
        if (!try_project(q, tgt_cam, proj)) continue;
        const int tx = static_cast<int>(std::lround(proj.pixel.x()));
        const int ty = static_cast<int>(std::lround(proj.pixel.y()));
        if (tx < 0 || tx >= tw || ty < 0 || ty >= th) continue;
        if (proj.depth > depth_limit(tx, ty)) continue;
        float value;
        if (shade_at(q, src_cam, tgt_cam, value)) mark(buffer, tx, ty, value);
      }
    }
  });

  // Splat-covered pixels are known by construction; shade them at their own
  // surface point (target pixel unprojected with the splatted depth).
  GrayImage surface_marks(tw, th, kUntouched);
  parallel_for(0, th, threads, [&](int ty) {
    for (int tx = 0; tx < tw; ++tx) {
      if (!splat.covered(tx, ty)) continue;
      const double d = static_cast<double>(splat.depth.at(tx, ty));
      if (!(d > 0.0)) continue;
      const Eigen::Vector3d p = unproject(Eigen::Vector2d(tx, ty), d, tgt_cam);
      float value;
      if (shade_at(p, src_cam, tgt_cam, value)) mark(surface_marks, tx, ty, value);
    }
  });

  for (int i = 0; i < tw * th; ++i) {
    float v = surface_marks.data[static_cast<size_t>(i)];
    for (const auto& b : buffers) v = std::min(v, b.data[static_cast<size_t>(i)]);
    mask.data[static_cast<size_t>(i)] = std::isfinite(v) ? std::clamp(v, 0.0f, 1.0f) : 0.0f;
  }
  return mask;
}

EpipolarMask binarize_mask(const EpipolarMask& mask) {
  EpipolarMask binary(mask.width, mask.height, 0.0f);
  for (size_t i = 0; i < mask.data.size(); ++i)
    binary.data[i] = mask.data[i] > 0.0f ? 1.0f : 0.0f;
  return binary;
}

}  // namespace epiwarp
