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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "raddet/annotate.hpp"
#include "raddet/png.hpp"
#include "raddet/spectrogram.hpp"

namespace raddet {

// Image of a spectrogram: dim_f rows by dim_t columns, row 0 holds the
// highest frequency, pixel = round(255 * value).
inline GrayImage to_image(const Spectrogram& s) {
  GrayImage img;
  img.width = s.dim_t;
  img.height = s.dim_f;
  img.pixels.resize(static_cast<std::size_t>(s.dim_t) * s.dim_f);
  for (int t = 0; t < s.dim_t; ++t) {
    for (int f = 0; f < s.dim_f; ++f) {
      const double v = std::clamp(s.at(t, f), 0.0, 1.0);
      img.at(s.dim_f - 1 - f, t) = static_cast<std::uint8_t>(std::lround(255.0 * v));
    }
  }
  return img;
}

inline std::vector<std::uint8_t> render(const Spectrogram& s) { return encode_png(to_image(s)); }

// Draws one-pixel box outlines at full intensity.
inline void burn_boxes(GrayImage& img, std::span<const Annotation> boxes, std::uint8_t value = 255) {
  auto px = [&](double u, int n) { return std::clamp(static_cast<int>(std::floor(u * n)), 0, n - 1); };
  for (const Annotation& a : boxes) {
    const int c0 = px(a.x_c - a.w / 2, img.width), c1 = px(a.x_c + a.w / 2, img.width);
    const int r0 = px(a.y_c - a.h / 2, img.height), r1 = px(a.y_c + a.h / 2, img.height);
    for (int c = c0; c <= c1; ++c) img.at(r0, c) = img.at(r1, c) = value;
    for (int r = r0; r <= r1; ++r) img.at(r, c0) = img.at(r, c1) = value;
  }
}

}  // namespace raddet
