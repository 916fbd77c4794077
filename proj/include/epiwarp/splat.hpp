// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>

#include "epiwarp/camera.hpp"
#include "epiwarp/image.hpp"

namespace epiwarp {

enum class SplatKernel { nearest, bilinear };

struct SplatParams {
  // Softmax sharpness per world unit of depth; larger favors nearer surfaces
  // more strongly. Zero degrades to a plain average.
  double beta = 10.0;
  SplatKernel kernel = SplatKernel::bilinear;
  // Reference depth for the softmax weight exp(beta * (ref - depth)). NaN
  // selects the median projected target depth of the current warp.
  double depth_scale_reference = std::numeric_limits<double>::quiet_NaN();
  // Minimum accumulated kernel mass for a target pixel to count as covered.
  double coverage_threshold = 1e-4;
};

struct SplatResult {
  RgbImage color;       // partial target view; background (black) where uncovered
  DepthImage depth;     // weighted target depth; 0 where uncovered
  GrayImage coverage;   // accumulated kernel mass, depth-independent
  double coverage_threshold = 1e-4;

  bool covered(int x, int y) const { return coverage.at(x, y) > coverage_threshold; }
  BoolImage covered_mask() const {
    BoolImage m(coverage.width, coverage.height);
    for (size_t i = 0; i < coverage.data.size(); ++i)
      m.data[i] = coverage.data[i] > coverage_threshold ? 1 : 0;
    return m;
  }
};

// Forward softmax splatting: every valid source pixel is unprojected with its
// depth, reprojected into the target camera, and deposits its color with
// weight exp(beta * (ref - target_depth)) spread by the kernel. Overlaps
// resolve toward the nearest surface as beta grows. Output color and depth
// are the weight-normalized sums; out-of-bounds and behind-camera
// contributions are dropped.
//
// Results are bit-identical for any `threads` value: projections are computed
// in parallel into per-pixel slots, and deposits are accumulated in a single
// fixed (row-major) order.
SplatResult forward_splat(const RgbImage& src, const DepthImage& src_depth, const Camera& src_cam,
                          const Camera& tgt_cam, const SplatParams& params = {}, int threads = 1);

}  // namespace epiwarp
