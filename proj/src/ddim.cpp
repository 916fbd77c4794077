// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/ddim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>

#include "epiwarp/image_io.hpp"
#include "epiwarp/rng.hpp"

namespace epiwarp {

namespace {

// Shared kernel for ddim_step and the in-loop final step (alpha_prev = 1).
RgbImage ddim_step_to_alpha(const RgbImage& x_t, double alpha_t, double alpha_prev,
                            const RgbImage& eps_pred) {
  const double sqrt_at = std::sqrt(alpha_t);
  const double sigma_t = std::sqrt(1.0 - alpha_t);
  const double sqrt_ap = std::sqrt(alpha_prev);
  const double sigma_p = std::sqrt(1.0 - alpha_prev);
  RgbImage out(x_t.width, x_t.height);
  for (size_t i = 0; i < out.data.size(); ++i) {
    const double x0_hat = (x_t.data[i] - sigma_t * eps_pred.data[i]) / sqrt_at;
    out.data[i] = static_cast<float>(sqrt_ap * x0_hat + sigma_p * eps_pred.data[i]);
  }
  return out;
}

RgbImage forward_noise_to_alpha(const RgbImage& x0, double alpha, const RgbImage& noise) {
  const double signal = std::sqrt(alpha);
  const double sigma = std::sqrt(1.0 - alpha);
  RgbImage out(x0.width, x0.height);
  for (size_t i = 0; i < out.data.size(); ++i)
    out.data[i] = static_cast<float>(signal * x0.data[i] + sigma * noise.data[i]);
  return out;
}

}  // namespace

RgbImage ddim_step(const RgbImage& x_t, int t, int t_prev, const RgbImage& eps_pred,
                   const NoiseSchedule& schedule) {
  check_contract(t > t_prev && t_prev >= 0 && t < schedule.total_steps,
                 "ddim_step requires total_steps > t > t_prev >= 0");
  check_same_size(x_t.width, x_t.height, eps_pred.width, eps_pred.height, "ddim_step");
  return ddim_step_to_alpha(x_t, schedule.alpha_bar[static_cast<size_t>(t)],
                            schedule.alpha_bar[static_cast<size_t>(t_prev)], eps_pred);
}

std::vector<int> ddim_timesteps(int total_steps, int inference_steps) {
  check_domain(inference_steps > 0 && inference_steps <= total_steps,
               "inference_steps must be in [1, total_steps]");
  std::vector<int> steps(static_cast<size_t>(inference_steps));
  if (inference_steps == 1) {
    steps[0] = total_steps - 1;
    return steps;
  }
  for (int j = 0; j < inference_steps; ++j)
    steps[static_cast<size_t>(j)] = static_cast<int>(std::lround(
        static_cast<double>(total_steps - 1) * (inference_steps - 1 - j) / (inference_steps - 1)));
  return steps;
}

RgbImage gaussian_image(std::uint64_t seed, std::string_view stream, int width, int height) {
  Rng rng = Rng(seed).stream(stream);
  RgbImage image(width, height);
  for (auto& v : image.data) v = static_cast<float>(rng.normal());
  return image;
}

RgbImage guidance_noise(std::uint64_t seed, int step_index, int width, int height) {
  Rng rng = Rng(seed).stream("ddim-guidance").stream(static_cast<std::uint64_t>(step_index));
  RgbImage image(width, height);
  for (auto& v : image.data) v = static_cast<float>(rng.normal());
  return image;
}

RgbImage guided_denoise_loop(const Denoiser& denoiser, const Conditioning& cond,
                             const NoiseSchedule& schedule, std::uint64_t seed,
                             const GuidanceOptions& options) {
  validate(schedule);
  const int width = cond.partial_view.width;
  const int height = cond.partial_view.height;
  check_contract(width > 0 && height > 0, "guided_denoise_loop: empty partial view");
  if (options.masked_guidance)
    check_same_size(width, height, cond.mask.width, cond.mask.height, "guided_denoise_loop");

  const std::vector<int> steps = ddim_timesteps(schedule.total_steps, schedule.inference_steps);
  RgbImage x = gaussian_image(seed, "ddim-init", width, height);

  for (size_t j = 0; j < steps.size(); ++j) {
    const int t = steps[j];
    const bool final_step = j + 1 == steps.size();
    const double alpha_t = schedule.alpha_bar[static_cast<size_t>(t)];
    const double alpha_next =
        final_step ? 1.0 : schedule.alpha_bar[static_cast<size_t>(steps[j + 1])];

    const RgbImage eps = denoiser(x, t, cond);
    check_contract(eps.same_size(x), "denoiser output shape differs from input");
    x = ddim_step_to_alpha(x, alpha_t, alpha_next, eps);

    if (static_cast<int>(j) < schedule.guidance_steps) {
      const RgbImage noise = guidance_noise(seed, static_cast<int>(j), width, height);
      RgbImage anchored = forward_noise_to_alpha(cond.partial_view, alpha_next, noise);
      if (options.masked_guidance) {
        // RePaint-style compositing: re-anchor only known pixels.
        for (int y = 0; y < height; ++y)
          for (int xx = 0; xx < width; ++xx)
            if (cond.mask.at(xx, y) == 0.0f)
              for (int c = 0; c < 3; ++c) anchored.at(xx, y, c) = x.at(xx, y, c);
      }
      x = std::move(anchored);
    }
    if (options.observer) options.observer(static_cast<int>(j), final_step ? -1 : steps[j + 1], x);
  }

  for (auto& v : x.data) v = std::clamp(v, 0.0f, 1.0f);
  return x;
}

Denoiser make_subprocess_denoiser(const std::string& command,
                                  const std::filesystem::path& workdir, const Conditioning& cond) {
  namespace fs = std::filesystem;
  fs::create_directories(workdir / "cond");
  save_pfm_rgb(workdir / "cond" / "partial.pfm", cond.partial_view);
  save_pfm_gray(workdir / "cond" / "mask.pfm", cond.mask);
  {
    std::ofstream emb(workdir / "cond" / "embedding.txt");
    for (float v : cond.source_embedding) emb << v << "\n";
  }

  return [command, workdir](const RgbImage& x_t, int t, const Conditioning&) {
    save_pfm_rgb(workdir / "x_t.pfm", x_t);
    {
      std::ofstream ts(workdir / "t.txt");
      ts << t << "\n";
    }
    const std::string invocation = command + " " + workdir.string();
    const int status = std::system(invocation.c_str());
    if (status != 0)
      throw Error("denoiser", "denoiser command failed with status " + std::to_string(status));
    RgbImage eps = load_pfm_rgb(workdir / "eps.pfm");
    check_contract(eps.same_size(x_t), "subprocess denoiser returned wrong shape");
    return eps;
  };
}

}  // namespace epiwarp
