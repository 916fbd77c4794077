// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "epiwarp/image.hpp"

namespace epiwarp {

struct FillResult {
  RgbImage image;
  bool any_known = false;  // false means everything was unknown (warning case)
};

// Diffusion-free stand-in for the inpainter: fills unknown pixels (mask == 0)
// by push-pull pyramid interpolation from known pixels, then relaxes the
// unknown region toward its neighborhood average. Known pixels are returned
// bit-exactly as given. With no known pixels at all the output is all
// background (black) and any_known is false.
FillResult baseline_fill(const RgbImage& partial, const EpipolarMask& mask);

}  // namespace epiwarp
