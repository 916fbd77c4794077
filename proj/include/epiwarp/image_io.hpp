// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>

#include "epiwarp/image.hpp"

namespace epiwarp {

// sRGB transfer functions (IEC 61966-2-1). Color PNGs are stored sRGB-encoded
// and decoded to linear floats on load; masks and coverage PNGs are raw
// values with no transfer applied.
double srgb_to_linear(double encoded);
double linear_to_srgb(double linear);

// 8- or 16-bit RGB(A) PNG -> linear float RGB. Alpha, if present, is dropped.
RgbImage load_png_rgb(const std::filesystem::path& path);
// Linear float RGB -> sRGB-encoded PNG. bit_depth must be 8 or 16. Values
// outside [0, 1] are clamped.
void save_png_rgb(const std::filesystem::path& path, const RgbImage& image, int bit_depth = 8);

// Grayscale PNG with raw (non-color-managed) values mapped to [0, 1].
GrayImage load_png_gray(const std::filesystem::path& path);
void save_png_gray(const std::filesystem::path& path, const GrayImage& image, int bit_depth = 8);

// Binary mask PNG: nonzero = true on load, 0/255 on save.
BoolImage load_png_mask(const std::filesystem::path& path);
void save_png_mask(const std::filesystem::path& path, const BoolImage& mask);

struct PngInfo {
  int width = 0;
  int height = 0;
  int bit_depth = 0;
  int channels = 0;
};
// Reads just the IHDR; cheap validity/dimension probe.
PngInfo read_png_info(const std::filesystem::path& path);

// PFM, 32-bit float scanlines stored bottom-up, scale header -1.0
// (little-endian). "Pf" carries one channel, "PF" three; depth maps use the
// single-channel form with invalid pixels encoded as nonpositive values.
DepthImage load_pfm_gray(const std::filesystem::path& path);
void save_pfm_gray(const std::filesystem::path& path, const GrayImage& image);
RgbImage load_pfm_rgb(const std::filesystem::path& path);
void save_pfm_rgb(const std::filesystem::path& path, const RgbImage& image);

struct PfmInfo {
  int width = 0;
  int height = 0;
  int channels = 0;
};
PfmInfo read_pfm_info(const std::filesystem::path& path);

}  // namespace epiwarp
