// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

#include "epiwarp/error.hpp"

namespace epiwarp {

// Planar float images, row-major with origin at the top-left pixel.
// RgbImage stores interleaved linear RGB; display images live in [0, 1] but
// the same container carries unbounded tensors (noise, DDIM states), with
// range checks applied at the file-format boundaries.
struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;  // 3 floats per pixel

  RgbImage() = default;
  RgbImage(int w, int h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<size_t>(w) * h * 3, fill) {}

  float& at(int x, int y, int c) {
    assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < 3);
    return data[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
  float at(int x, int y, int c) const {
    assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < 3);
    return data[(static_cast<size_t>(y) * width + x) * 3 + c];
  }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
  bool same_size(const RgbImage& other) const {
    return width == other.width && height == other.height;
  }
};

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<float> data;

  GrayImage() = default;
  GrayImage(int w, int h, float fill = 0.0f)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill) {}

  float& at(int x, int y) {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return data[static_cast<size_t>(y) * width + x];
  }
  float at(int x, int y) const {
    assert(x >= 0 && x < width && y >= 0 && y < height);
    return data[static_cast<size_t>(y) * width + x];
  }
  size_t pixel_count() const { return static_cast<size_t>(width) * height; }
};

// Semantic aliases; all share the GrayImage layout.
using DepthImage = GrayImage;    // camera-Z depth, invalid = nonpositive or non-finite
using EpipolarMask = GrayImage;  // [0,1]; 0 = inpaint, 1 = known with zero ray-angle change
using WeightMap = GrayImage;     // per-pixel loss weight

struct BoolImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BoolImage() = default;
  BoolImage(int w, int h, bool fill = false)
      : width(w), height(h), data(static_cast<size_t>(w) * h, fill ? 1 : 0) {}

  bool at(int x, int y) const { return data[static_cast<size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) { data[static_cast<size_t>(y) * width + x] = v ? 1 : 0; }
  size_t count_true() const {
    size_t n = 0;
    for (auto v : data) n += v != 0;
    return n;
  }
};

inline bool depth_valid(float d) { return std::isfinite(d) && d > 0.0f; }

inline BoolImage valid_depth_mask(const DepthImage& depth) {
  BoolImage mask(depth.width, depth.height);
  for (size_t i = 0; i < depth.data.size(); ++i) mask.data[i] = depth_valid(depth.data[i]) ? 1 : 0;
  return mask;
}

inline void check_same_size(int wa, int ha, int wb, int hb, const char* what) {
  if (wa != wb || ha != hb) throw_contract(std::string(what) + ": image dimensions mismatch");
}

}  // namespace epiwarp
