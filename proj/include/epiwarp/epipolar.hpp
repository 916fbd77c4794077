// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "epiwarp/camera.hpp"
#include "epiwarp/image.hpp"
#include "epiwarp/splat.hpp"

namespace epiwarp {

// Angle in degrees, range [0, 180], between the unit vectors from a world
// point to the two camera centers. Measures how much viewpoint change the
// point undergoes between the views.
double ray_angle(const Eigen::Vector3d& world_point, const Camera& src_cam, const Camera& tgt_cam);

struct EpipolarMaskParams {
  // Ray-march step as a fraction of the target-pixel footprint at the
  // surface point's depth; sub-pixel stepping keeps epipolar lines gap-free.
  double step_scale = 0.5;
  int max_steps = 4096;
  // Occlusion tolerance as a fraction of the scene scale (max bounding-box
  // extent of the unprojected source cloud).
  double occlusion_delta_scale = 1e-3;
};

// Smooth epipolar inpainting mask. For every valid source pixel the ray from
// the source camera center to its surface point is marched in fixed steps;
// marched points that project in front of the splatted target surface mark
// their target pixel as known free space. Splat-covered pixels are marked at
// their own surface point. Known pixels carry v = 1 - angle/180 with the
// minimum kept on collisions (largest viewpoint change wins); everything
// untouched stays exactly 0 and is to be inpainted.
//
// Bit-identical across thread counts: collision resolution is an exact
// floating-point min, which is order-free.
EpipolarMask epipolar_mask(const DepthImage& src_depth, const Camera& src_cam,
                           const Camera& tgt_cam, const SplatResult& splat,
                           const EpipolarMaskParams& params = {}, int threads = 1);

// {0,1} variant reproducing the binary-mask ablation: known = value > 0.
EpipolarMask binarize_mask(const EpipolarMask& mask);

}  // namespace epiwarp
