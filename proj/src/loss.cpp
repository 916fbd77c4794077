// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/loss.hpp"

namespace epiwarp {

WeightMap boundary_weight_map(const EpipolarMask& mask, const SplatResult& splat,
                              float w_boundary) {
  check_same_size(mask.width, mask.height, splat.coverage.width, splat.coverage.height,
                  "boundary_weight_map");
  WeightMap weights(mask.width, mask.height, 1.0f);
  for (int y = 0; y < mask.height; ++y)
    for (int x = 0; x < mask.width; ++x)
      if (mask.at(x, y) == 0.0f && !splat.covered(x, y)) weights.at(x, y) = w_boundary;
  return weights;
}

double weighted_noise_loss(const RgbImage& eps_true, const RgbImage& eps_pred,
                           const WeightMap& weights) {
  check_same_size(eps_true.width, eps_true.height, eps_pred.width, eps_pred.height,
                  "weighted_noise_loss");
  check_same_size(eps_true.width, eps_true.height, weights.width, weights.height,
                  "weighted_noise_loss");
  double sum = 0.0;
  for (size_t i = 0; i < weights.data.size(); ++i) {
    const double w = weights.data[i];
    for (int c = 0; c < 3; ++c) {
      const double diff = w * (static_cast<double>(eps_true.data[i * 3 + c]) -
                               static_cast<double>(eps_pred.data[i * 3 + c]));
      sum += diff * diff;
    }
  }
  return sum / (static_cast<double>(weights.data.size()) * 3.0);
}

}  // namespace epiwarp
