// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "epiwarp/error.hpp"
#include "epiwarp/image.hpp"

namespace epiwarp {

// DDIM noise schedule: cumulative signal fractions alpha_bar plus the
// step-selection parameters used by guided inference and early-step training.
struct NoiseSchedule {
  int total_steps = 0;
  std::vector<double> alpha_bar;  // strictly decreasing, in (0, 1]
  int inference_steps = 500;
  int guidance_steps = 10;
};

void validate(const NoiseSchedule& schedule);

// Standard linear-beta construction: beta linearly spaced over [beta_start,
// beta_end], alpha_bar[t] = prod_{i<=t} (1 - beta_i).
NoiseSchedule make_linear_schedule(int total_steps, double beta_start = 1e-4,
                                   double beta_end = 0.02);

// Uniform timestep from the highest-noise `fraction` of the schedule,
// t in [ceil((1-fraction)*T), T-1]. Training on these steps targets shape
// discovery, which happens at high noise. Deterministic per seed.
int sample_early_timestep(std::uint64_t seed, const NoiseSchedule& schedule, double fraction);

// Forward diffusion: x_t = sqrt(alpha_bar[t]) * x0 + sqrt(1-alpha_bar[t]) * noise.
RgbImage ddim_forward_noise(const RgbImage& x0, int t, const RgbImage& noise,
                            const NoiseSchedule& schedule);

// JSON schema: {"T":int,"beta_start":f64,"beta_end":f64,"inference_steps":int,
// "guidance_steps":int}. Schedules serialize by construction parameters.
struct ScheduleSpec {
  int total_steps = 1000;
  double beta_start = 1e-4;
  double beta_end = 0.02;
  int inference_steps = 500;
  int guidance_steps = 10;

  NoiseSchedule build() const;
};
ScheduleSpec load_schedule_json(const std::filesystem::path& path);
void save_schedule_json(const std::filesystem::path& path, const ScheduleSpec& spec);

}  // namespace epiwarp
