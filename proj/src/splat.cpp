// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/splat.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "epiwarp/parallel.hpp"

namespace epiwarp {

namespace {

constexpr double kMaxExponent = 30.0;  // clamp for exp(beta * (ref - d))

struct ProjectedPixel {
  float u = 0.0f;
  float v = 0.0f;
  float depth = -1.0f;  // target camera-Z; <= 0 marks dropped pixels
};

}  // namespace

SplatResult forward_splat(const RgbImage& src, const DepthImage& src_depth, const Camera& src_cam,
                          const Camera& tgt_cam, const SplatParams& params, int threads) {
  check_same_size(src.width, src.height, src_depth.width, src_depth.height, "forward_splat");
  check_contract(src.width == src_cam.width && src.height == src_cam.height,
                 "forward_splat: source image does not match source camera resolution");
  validate(src_cam);
  validate(tgt_cam);
  check_domain(params.beta >= 0.0, "splat beta must be nonnegative");

  const int sw = src.width, sh = src.height;
  const int tw = tgt_cam.width, th = tgt_cam.height;

  // Pass 1 (parallel): project every valid source pixel. Each item writes its
  // own slot, so the pass is race-free and thread-count independent.
  std::vector<ProjectedPixel> projected(static_cast<size_t>(sw) * sh);
  parallel_for(0, sh, threads, [&](int y) {
    for (int x = 0; x < sw; ++x) {
      const float d = src_depth.at(x, y);
      if (!depth_valid(d)) continue;
      const Eigen::Vector3d world =
          unproject(Eigen::Vector2d(x, y), static_cast<double>(d), src_cam);
      Projection proj;
      if (!try_project(world, tgt_cam, proj)) continue;
      auto& slot = projected[static_cast<size_t>(y) * sw + x];
      slot.u = static_cast<float>(proj.pixel.x());
      slot.v = static_cast<float>(proj.pixel.y());
      slot.depth = static_cast<float>(proj.depth);
    }
  });

  double ref = params.depth_scale_reference;
  if (!std::isfinite(ref)) {
    std::vector<float> depths;
    depths.reserve(projected.size());
    for (const auto& p : projected)
      if (p.depth > 0.0f) depths.push_back(p.depth);
    if (depths.empty()) {
      ref = 0.0;
    } else {
      const size_t mid = depths.size() / 2;
      std::nth_element(depths.begin(), depths.begin() + static_cast<std::ptrdiff_t>(mid),
                       depths.end());
      ref = static_cast<double>(depths[mid]);
    }
  }

  // Pass 2 (sequential): accumulate deposits in row-major source order into
  // double buffers. The fixed order makes the floating-point sums, and hence
  // the output, independent of the thread count used in pass 1.
  const size_t n = static_cast<size_t>(tw) * th;
  std::vector<double> sum_w(n, 0.0), sum_wd(n, 0.0);
  std::vector<double> sum_wc(n * 3, 0.0);
  std::vector<double> mass(n, 0.0);

  auto deposit = [&](int tx, int ty, double kernel_w, double w, const float* rgb, double d) {
    if (tx < 0 || tx >= tw || ty < 0 || ty >= th || kernel_w <= 0.0) return;
    const size_t i = static_cast<size_t>(ty) * tw + tx;
    const double ww = w * kernel_w;
    mass[i] += kernel_w;
    sum_w[i] += ww;
    sum_wd[i] += ww * d;
    sum_wc[i * 3 + 0] += ww * rgb[0];
    sum_wc[i * 3 + 1] += ww * rgb[1];
    sum_wc[i * 3 + 2] += ww * rgb[2];
  };

  for (int y = 0; y < sh; ++y) {
    for (int x = 0; x < sw; ++x) {
      const auto& p = projected[static_cast<size_t>(y) * sw + x];
      if (p.depth <= 0.0f) continue;
      const double d = static_cast<double>(p.depth);
      const double exponent = std::clamp(params.beta * (ref - d), -kMaxExponent, kMaxExponent);
      const double w = std::exp(exponent);
      const float* rgb = &src.at(x, y, 0);

      if (params.kernel == SplatKernel::nearest) {
        deposit(static_cast<int>(std::lround(p.u)), static_cast<int>(std::lround(p.v)), 1.0, w,
                rgb, d);
      } else {
        const double fu = std::floor(p.u), fv = std::floor(p.v);
        const int x0 = static_cast<int>(fu), y0 = static_cast<int>(fv);
        const double au = p.u - fu, av = p.v - fv;
        deposit(x0, y0, (1.0 - au) * (1.0 - av), w, rgb, d);
        deposit(x0 + 1, y0, au * (1.0 - av), w, rgb, d);
        deposit(x0, y0 + 1, (1.0 - au) * av, w, rgb, d);
        deposit(x0 + 1, y0 + 1, au * av, w, rgb, d);
      }
    }
  }

  SplatResult result;
  result.color = RgbImage(tw, th, 0.0f);
  result.depth = DepthImage(tw, th, 0.0f);
  result.coverage = GrayImage(tw, th, 0.0f);
  result.coverage_threshold = params.coverage_threshold;
  for (size_t i = 0; i < n; ++i) {
    result.coverage.data[i] = static_cast<float>(mass[i]);
    if (mass[i] > params.coverage_threshold && sum_w[i] > 0.0) {
      result.color.data[i * 3 + 0] = static_cast<float>(sum_wc[i * 3 + 0] / sum_w[i]);
      result.color.data[i * 3 + 1] = static_cast<float>(sum_wc[i * 3 + 1] / sum_w[i]);
      result.color.data[i * 3 + 2] = static_cast<float>(sum_wc[i * 3 + 2] / sum_w[i]);
      result.depth.data[i] = static_cast<float>(sum_wd[i] / sum_w[i]);
    }
  }
  return result;
}

}  // namespace epiwarp
