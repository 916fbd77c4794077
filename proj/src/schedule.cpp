// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/schedule.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "epiwarp/rng.hpp"

namespace epiwarp {

void validate(const NoiseSchedule& schedule) {
  check_domain(schedule.total_steps > 0, "schedule must have at least one step");
  check_domain(static_cast<int>(schedule.alpha_bar.size()) == schedule.total_steps,
               "alpha_bar length must equal total_steps");
  double prev = 1.0 + 1e-12;
  for (double a : schedule.alpha_bar) {
    check_domain(a > 0.0 && a <= 1.0 && a < prev, "alpha_bar must be strictly decreasing in (0, 1]");
    prev = a;
  }
  check_domain(schedule.inference_steps > 0 && schedule.inference_steps <= schedule.total_steps,
               "inference_steps must be in [1, total_steps]");
  check_domain(schedule.guidance_steps >= 0 && schedule.guidance_steps <= schedule.inference_steps,
               "guidance_steps must not exceed inference_steps");
}

NoiseSchedule make_linear_schedule(int total_steps, double beta_start, double beta_end) {
  check_domain(total_steps > 0, "schedule must have at least one step");
  check_domain(beta_start > 0.0 && beta_start <= beta_end && beta_end < 1.0,
               "betas must satisfy 0 < beta_start <= beta_end < 1");
  NoiseSchedule schedule;
  schedule.total_steps = total_steps;
  schedule.alpha_bar.resize(static_cast<size_t>(total_steps));
  double product = 1.0;
  for (int t = 0; t < total_steps; ++t) {
    const double beta =
        total_steps == 1
            ? beta_start
            : beta_start + (beta_end - beta_start) * static_cast<double>(t) / (total_steps - 1);
    product *= 1.0 - beta;
    schedule.alpha_bar[static_cast<size_t>(t)] = product;
  }
  return schedule;
}

int sample_early_timestep(std::uint64_t seed, const NoiseSchedule& schedule, double fraction) {
  check_domain(fraction > 0.0 && fraction <= 1.0, "fraction must be in (0, 1]");
  const int total = schedule.total_steps;
  check_domain(total > 0, "schedule must have at least one step");
  const int lo = static_cast<int>(std::ceil((1.0 - fraction) * total));
  if (lo > total - 1) throw_domain("early-timestep range is empty");
  Rng rng = Rng(seed).stream("early-timestep");
  return lo + static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(total - lo)));
}

RgbImage ddim_forward_noise(const RgbImage& x0, int t, const RgbImage& noise,
                            const NoiseSchedule& schedule) {
  check_contract(t >= 0 && t < schedule.total_steps, "timestep index out of range");
  check_same_size(x0.width, x0.height, noise.width, noise.height, "ddim_forward_noise");
  const double alpha = schedule.alpha_bar[static_cast<size_t>(t)];
  const double signal = std::sqrt(alpha);
  const double sigma = std::sqrt(1.0 - alpha);
  RgbImage out(x0.width, x0.height);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = static_cast<float>(signal * x0.data[i] + sigma * noise.data[i]);
  return out;
}

NoiseSchedule ScheduleSpec::build() const {
  NoiseSchedule schedule = make_linear_schedule(total_steps, beta_start, beta_end);
  schedule.inference_steps = inference_steps;
  schedule.guidance_steps = guidance_steps;
  validate(schedule);
  return schedule;
}

ScheduleSpec load_schedule_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open schedule file: " + path.string());
  try {
    nlohmann::json j;
    in >> j;
    ScheduleSpec spec;
    spec.total_steps = j.at("T").get<int>();
    spec.beta_start = j.at("beta_start").get<double>();
    spec.beta_end = j.at("beta_end").get<double>();
    spec.inference_steps = j.at("inference_steps").get<int>();
    spec.guidance_steps = j.at("guidance_steps").get<int>();
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw_io("malformed schedule JSON in " + path.string() + ": " + e.what());
  }
}

void save_schedule_json(const std::filesystem::path& path, const ScheduleSpec& spec) {
  std::ofstream out(path);
  if (!out) throw_io("cannot write schedule file: " + path.string());
  nlohmann::json j;
  j["T"] = spec.total_steps;
  j["beta_start"] = spec.beta_start;
  j["beta_end"] = spec.beta_end;
  j["inference_steps"] = spec.inference_steps;
  j["guidance_steps"] = spec.guidance_steps;
  out << j.dump(2) << "\n";
}

}  // namespace epiwarp
