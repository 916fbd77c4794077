// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "epiwarp/image.hpp"
#include "epiwarp/splat.hpp"

namespace epiwarp {

// Loss re-weighting map: w_boundary at pixels that are unknown in the mask
// and not splat-covered (where the object boundary must be discovered),
// 1 everywhere else. Only those two values ever appear.
WeightMap boundary_weight_map(const EpipolarMask& mask, const SplatResult& splat,
                              float w_boundary);

// Mean over pixels and channels of (W * (eps_true - eps_pred))^2, with W
// broadcast across channels. With W == 1 this is the plain L2 epsilon loss.
double weighted_noise_loss(const RgbImage& eps_true, const RgbImage& eps_pred,
                           const WeightMap& weights);

}  // namespace epiwarp
