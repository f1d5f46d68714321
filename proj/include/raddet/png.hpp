// Copyright 2026 The RadDet Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <png.h>

#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace raddet {

// 8-bit single-channel image, row-major.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t& at(int row, int col) { return pixels[static_cast<std::size_t>(row) * width + col]; }
  std::uint8_t at(int row, int col) const { return pixels[static_cast<std::size_t>(row) * width + col]; }
};

// Encoder settings are fixed so identical images give identical bytes.
inline constexpr int kPngCompressionLevel = 6;

namespace detail {

struct PngReadCursor {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

inline void png_append_bytes(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

inline void png_flush_noop(png_structp) {}

inline void png_read_bytes(png_structp png, png_bytep data, png_size_t len) {
  auto* cur = static_cast<PngReadCursor*>(png_get_io_ptr(png));
  if (cur->pos + len > cur->size) png_error(png, "truncated PNG stream");
  std::memcpy(data, cur->data + cur->pos, len);
  cur->pos += len;
}

// libpng reports errors by longjmp; these wrappers keep only trivially
// destructible locals between setjmp and any libpng call.
inline bool png_encode_impl(const GrayImage& img, std::vector<std::uint8_t>* out,
                            std::vector<png_bytep>* rows) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, out, png_append_bytes, png_flush_noop);
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, kPngCompressionLevel);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_PAETH);
  png_set_rows(png, info, rows->data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

inline bool png_decode_impl(PngReadCursor* cur, GrayImage* img) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, cur, png_read_bytes);
  png_read_png(png, info, PNG_TRANSFORM_STRIP_16 | PNG_TRANSFORM_PACKING | PNG_TRANSFORM_EXPAND, nullptr);
  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int ct = png_get_color_type(png, info);
  if (ct != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_bytepp rows = png_get_rows(png, info);
  img->width = static_cast<int>(w);
  img->height = static_cast<int>(h);
  img->pixels.resize(static_cast<std::size_t>(w) * h);
  for (png_uint_32 r = 0; r < h; ++r) std::memcpy(img->pixels.data() + static_cast<std::size_t>(r) * w, rows[r], w);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

}  // namespace detail

inline std::vector<std::uint8_t> encode_png(const GrayImage& img) {
  if (img.width <= 0 || img.height <= 0 ||
      img.pixels.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height))
    throw std::invalid_argument("encode_png: image dimensions do not match pixel buffer");
  std::vector<std::uint8_t> out;
  std::vector<png_bytep> rows(static_cast<std::size_t>(img.height));
  for (int r = 0; r < img.height; ++r)
    rows[static_cast<std::size_t>(r)] =
        const_cast<png_bytep>(img.pixels.data() + static_cast<std::size_t>(r) * img.width);
  if (!detail::png_encode_impl(img, &out, &rows)) throw std::runtime_error("encode_png: libpng failure");
  return out;
}

// Decodes an 8-bit grayscale PNG.
inline GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  detail::PngReadCursor cur{bytes.data(), bytes.size(), 0};
  GrayImage img;
  if (!detail::png_decode_impl(&cur, &img))
    throw std::runtime_error("decode_png: not an 8-bit grayscale PNG or corrupt stream");
  return img;
}

}  // namespace raddet
