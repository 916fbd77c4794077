// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "epiwarp/image.hpp"
#include "epiwarp/schedule.hpp"

namespace epiwarp {

// Everything the denoiser sees besides the noisy image: the warped partial
// target view, the epipolar mask, and an opaque source-view embedding.
struct Conditioning {
  RgbImage partial_view;
  EpipolarMask mask;
  std::vector<float> source_embedding;
};

// Pluggable denoiser contract: predicts the noise in x_t at step t. Output
// must match the input shape and be deterministic for fixed inputs.
using Denoiser = std::function<RgbImage(const RgbImage& x_t, int t, const Conditioning&)>;

// Deterministic (eta = 0) DDIM update from step t to t_prev:
//   x0_hat  = (x_t - sqrt(1-a_t) * eps) / sqrt(a_t)
//   x_prev  = sqrt(a_prev) * x0_hat + sqrt(1-a_prev) * eps
RgbImage ddim_step(const RgbImage& x_t, int t, int t_prev, const RgbImage& eps_pred,
                   const NoiseSchedule& schedule);

// Descending inference timesteps, evenly spaced from T-1 down to 0.
std::vector<int> ddim_timesteps(int total_steps, int inference_steps);

// Seeded standard-normal image; stream "ddim-init" drives the start state.
RgbImage gaussian_image(std::uint64_t seed, std::string_view stream, int width, int height);

// Noise used to re-anchor the output of guidance step `step_index`. Exposed
// so the replacement state can be reproduced exactly outside the loop.
RgbImage guidance_noise(std::uint64_t seed, int step_index, int width, int height);

struct GuidanceOptions {
  // Replace only unknown (mask == 0) pixels instead of the whole step output.
  bool masked_guidance = false;
  // Called after every step (post-replacement) with the step index, the step
  // the state now sits at (-1 once fully denoised), and the state itself.
  std::function<void(int step_index, int t_next, const RgbImage& state)> observer;
};

// DDIM sampling with partial-view guidance: runs schedule.inference_steps
// evenly spaced steps from t = T-1 down to 0, and for each of the first
// schedule.guidance_steps steps replaces the step output with a freshly
// noised copy of cond.partial_view at the destination noise level. The
// final image is clamped to [0, 1]. Pure function of (inputs, seed).
RgbImage guided_denoise_loop(const Denoiser& denoiser, const Conditioning& cond,
                             const NoiseSchedule& schedule, std::uint64_t seed,
                             const GuidanceOptions& options = {});

// Denoiser speaking the subprocess protocol: each step writes x_t.pfm and
// t.txt into the work directory (cond/ is written once: partial.pfm,
// mask.pfm, embedding.txt), invokes `command <workdir>`, and reads back
// eps.pfm. Lets an external neural denoiser attach without linking.
Denoiser make_subprocess_denoiser(const std::string& command,
                                  const std::filesystem::path& workdir, const Conditioning& cond);

}  // namespace epiwarp
