// Copyright contributors to the epiwarp project
// SPDX-License-Identifier: Apache-2.0

#include "epiwarp/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

namespace epiwarp {

double srgb_to_linear(double encoded) {
  if (encoded <= 0.04045) return encoded / 12.92;
  return std::pow((encoded + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double linear) {
  if (linear <= 0.0031308) return linear * 12.92;
  return 1.055 * std::pow(linear, 1.0 / 2.4) - 0.055;
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

// Decodes any PNG into 16-bit samples with the requested channel count
// (1 = gray, 3 = rgb). Handles palette/alpha/bit-depth expansion in libpng.
std::vector<std::uint16_t> read_png_samples(const std::filesystem::path& path, int want_channels,
                                            int& width, int& height, int& src_bit_depth) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw_io("cannot open PNG: " + path.string());

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw_io("libpng init failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw_io("libpng init failed");
  if (setjmp(png_jmpbuf(r.png))) throw_io("malformed PNG: " + path.string());

  png_init_io(r.png, file.get());
  png_read_info(r.png, r.info);

  width = static_cast<int>(png_get_image_width(r.png, r.info));
  height = static_cast<int>(png_get_image_height(r.png, r.info));
  src_bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && src_bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  png_set_strip_alpha(r.png);
  if (src_bit_depth < 16) png_set_expand_16(r.png);
  if (want_channels == 3) {
    png_set_gray_to_rgb(r.png);
  } else {
    if (color_type & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray_fixed(r.png, 1, -1, -1);
  }
  png_set_swap(r.png);  // libpng emits big-endian 16-bit; we want host order
  png_read_update_info(r.png, r.info);

  const size_t stride = static_cast<size_t>(width) * want_channels;
  std::vector<std::uint16_t> samples(stride * height);
  std::vector<png_bytep> rows(static_cast<size_t>(height));
  for (int y = 0; y < height; ++y)
    rows[static_cast<size_t>(y)] = reinterpret_cast<png_bytep>(samples.data() + stride * y);
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return samples;
}

void write_png_samples(const std::filesystem::path& path, const std::uint16_t* samples, int width,
                       int height, int channels, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw_domain("PNG bit depth must be 8 or 16");
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw_io("cannot write PNG: " + path.string());

  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!w.png) throw_io("libpng init failed");
  w.info = png_create_info_struct(w.png);
  if (!w.info) throw_io("libpng init failed");
  if (setjmp(png_jmpbuf(w.png))) throw_io("PNG write failed: " + path.string());

  png_init_io(w.png, file.get());
  png_set_IHDR(w.png, w.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height),
               bit_depth, channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(w.png, w.info);

  const size_t stride = static_cast<size_t>(width) * channels;
  if (bit_depth == 16) {
    png_set_swap(w.png);
    std::vector<png_bytep> rows(static_cast<size_t>(height));
    for (int y = 0; y < height; ++y)
      rows[static_cast<size_t>(y)] =
          reinterpret_cast<png_bytep>(const_cast<std::uint16_t*>(samples) + stride * y);
    png_write_image(w.png, rows.data());
  } else {
    std::vector<std::uint8_t> row8(stride);
    for (int y = 0; y < height; ++y) {
      for (size_t i = 0; i < stride; ++i)
        row8[i] = static_cast<std::uint8_t>(samples[stride * y + i] >> 8);
      png_write_row(w.png, row8.data());
    }
  }
  png_write_end(w.png, nullptr);
}

std::uint16_t quantize16(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint16_t>(std::lround(v * 65535.0));
}

// 8-bit quantization routed through the 16-bit writer: the writer keeps the
// high byte, so produce high-byte-replicated samples for exact 8-bit rounds.
std::uint16_t quantize8_as16(double v) {
  v = std::clamp(v, 0.0, 1.0);
  const auto b = static_cast<std::uint16_t>(std::lround(v * 255.0));
  return static_cast<std::uint16_t>(b << 8 | b);
}

}  // namespace

RgbImage load_png_rgb(const std::filesystem::path& path) {
  int width = 0, height = 0, bit_depth = 0;
  const auto samples = read_png_samples(path, 3, width, height, bit_depth);
  RgbImage image(width, height);
  // 8-bit files were expanded by replicating the high byte (65535/257=255),
  // so dividing by 65535 recovers v/255 exactly.
  for (size_t i = 0; i < image.data.size(); ++i)
    image.data[i] = static_cast<float>(srgb_to_linear(samples[i] / 65535.0));
  return image;
}

void save_png_rgb(const std::filesystem::path& path, const RgbImage& image, int bit_depth) {
  check_domain(image.width > 0 && image.height > 0, "cannot save empty image");
  std::vector<std::uint16_t> samples(image.data.size());
  for (size_t i = 0; i < image.data.size(); ++i) {
    const double encoded = linear_to_srgb(std::clamp(static_cast<double>(image.data[i]), 0.0, 1.0));
    samples[i] = bit_depth == 8 ? quantize8_as16(encoded) : quantize16(encoded);
  }
  write_png_samples(path, samples.data(), image.width, image.height, 3, bit_depth);
}

GrayImage load_png_gray(const std::filesystem::path& path) {
  int width = 0, height = 0, bit_depth = 0;
  const auto samples = read_png_samples(path, 1, width, height, bit_depth);
  GrayImage image(width, height);
  for (size_t i = 0; i < image.data.size(); ++i)
    image.data[i] = static_cast<float>(samples[i] / 65535.0);
  return image;
}

void save_png_gray(const std::filesystem::path& path, const GrayImage& image, int bit_depth) {
  check_domain(image.width > 0 && image.height > 0, "cannot save empty image");
  std::vector<std::uint16_t> samples(image.data.size());
  for (size_t i = 0; i < image.data.size(); ++i) {
    const double v = static_cast<double>(image.data[i]);
    samples[i] = bit_depth == 8 ? quantize8_as16(v) : quantize16(v);
  }
  write_png_samples(path, samples.data(), image.width, image.height, 1, bit_depth);
}

BoolImage load_png_mask(const std::filesystem::path& path) {
  const GrayImage gray = load_png_gray(path);
  BoolImage mask(gray.width, gray.height);
  for (size_t i = 0; i < gray.data.size(); ++i) mask.data[i] = gray.data[i] > 0.0f ? 1 : 0;
  return mask;
}

void save_png_mask(const std::filesystem::path& path, const BoolImage& mask) {
  GrayImage gray(mask.width, mask.height);
  for (size_t i = 0; i < mask.data.size(); ++i) gray.data[i] = mask.data[i] ? 1.0f : 0.0f;
  save_png_gray(path, gray, 8);
}

PngInfo read_png_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open PNG: " + path.string());
  std::uint8_t header[33] = {};
  in.read(reinterpret_cast<char*>(header), sizeof(header));
  static const std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (in.gcount() != sizeof(header) || std::memcmp(header, kSig, 8) != 0 ||
      std::memcmp(header + 12, "IHDR", 4) != 0)
    throw_io("not a PNG file: " + path.string());
  auto be32 = [&](int off) {
    return (header[off] << 24) | (header[off + 1] << 16) | (header[off + 2] << 8) |
           header[off + 3];
  };
  PngInfo info;
  info.width = be32(16);
  info.height = be32(20);
  info.bit_depth = header[24];
  switch (header[25]) {  // color type
    case 0: info.channels = 1; break;
    case 2: info.channels = 3; break;
    case 3: info.channels = 1; break;
    case 4: info.channels = 2; break;
    case 6: info.channels = 4; break;
    default: throw_io("invalid PNG color type: " + path.string());
  }
  if (info.width <= 0 || info.height <= 0) throw_io("invalid PNG dimensions: " + path.string());
  return info;
}

namespace {

PfmInfo read_pfm_header(std::istream& in, const std::filesystem::path& path, double& scale) {
  auto next_token = [&]() {
    std::string tok;
    if (!(in >> tok)) throw_io("truncated PFM header: " + path.string());
    return tok;
  };
  const std::string magic = next_token();
  PfmInfo info;
  if (magic == "PF")
    info.channels = 3;
  else if (magic == "Pf")
    info.channels = 1;
  else
    throw_io("not a PFM file: " + path.string());
  try {
    info.width = std::stoi(next_token());
    info.height = std::stoi(next_token());
    scale = std::stod(next_token());
  } catch (const std::exception&) {
    throw_io("malformed PFM header: " + path.string());
  }
  if (info.width <= 0 || info.height <= 0) throw_io("invalid PFM dimensions: " + path.string());
  in.get();  // single whitespace byte terminating the header
  return info;
}

std::vector<float> read_pfm_data(const std::filesystem::path& path, PfmInfo& info) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open PFM: " + path.string());
  double scale = -1.0;
  info = read_pfm_header(in, path, scale);

  const size_t count = static_cast<size_t>(info.width) * info.height * info.channels;
  std::vector<float> raw(count);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count * 4));
  if (static_cast<size_t>(in.gcount()) != count * 4) throw_io("truncated PFM data: " + path.string());

  const bool little_endian = scale < 0.0;
  if (little_endian != (std::endian::native == std::endian::little)) {
    for (auto& f : raw) {
      auto u = std::bit_cast<std::uint32_t>(f);
      u = ((u & 0xff) << 24) | ((u & 0xff00) << 8) | ((u >> 8) & 0xff00) | (u >> 24);
      f = std::bit_cast<float>(u);
    }
  }
  const double mag = std::abs(scale);
  if (mag != 1.0 && mag != 0.0)
    for (auto& f : raw) f = static_cast<float>(f * mag);

  // PFM scanlines run bottom-up; flip into top-down order.
  std::vector<float> data(count);
  const size_t stride = static_cast<size_t>(info.width) * info.channels;
  for (int y = 0; y < info.height; ++y)
    std::memcpy(data.data() + stride * y, raw.data() + stride * (info.height - 1 - y), stride * 4);
  return data;
}

void write_pfm_data(const std::filesystem::path& path, const float* data, int width, int height,
                    int channels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw_io("cannot write PFM: " + path.string());
  static_assert(std::endian::native == std::endian::little, "PFM writer assumes little-endian host");
  out << (channels == 3 ? "PF" : "Pf") << "\n" << width << " " << height << "\n" << "-1.0" << "\n";
  const size_t stride = static_cast<size_t>(width) * channels;
  for (int y = height - 1; y >= 0; --y)
    out.write(reinterpret_cast<const char*>(data + stride * y),
              static_cast<std::streamsize>(stride * 4));
  if (!out) throw_io("PFM write failed: " + path.string());
}

}  // namespace

DepthImage load_pfm_gray(const std::filesystem::path& path) {
  PfmInfo info;
  auto data = read_pfm_data(path, info);
  if (info.channels != 1) throw_io("expected single-channel PFM: " + path.string());
  DepthImage image(info.width, info.height);
  image.data = std::move(data);
  return image;
}

void save_pfm_gray(const std::filesystem::path& path, const GrayImage& image) {
  check_domain(image.width > 0 && image.height > 0, "cannot save empty image");
  write_pfm_data(path, image.data.data(), image.width, image.height, 1);
}

RgbImage load_pfm_rgb(const std::filesystem::path& path) {
  PfmInfo info;
  auto data = read_pfm_data(path, info);
  if (info.channels != 3) throw_io("expected three-channel PFM: " + path.string());
  RgbImage image(info.width, info.height);
  image.data = std::move(data);
  return image;
}

void save_pfm_rgb(const std::filesystem::path& path, const RgbImage& image) {
  check_domain(image.width > 0 && image.height > 0, "cannot save empty image");
  write_pfm_data(path, image.data.data(), image.width, image.height, 3);
}

PfmInfo read_pfm_info(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open PFM: " + path.string());
  double scale = 0.0;
  return read_pfm_header(in, path, scale);
}

}  // namespace epiwarp
