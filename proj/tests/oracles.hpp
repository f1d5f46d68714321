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

// Reference implementations used only by tests. Each one is written the
// slow, obvious way and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

using cd = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Direct O(n^2) DFT, X[k] = sum x[n] e^{-j 2 pi k n / N}.
inline std::vector<cd> dft(const std::vector<cd>& x) {
  const std::size_t n = x.size();
  std::vector<cd> X(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd acc = 0;
    for (std::size_t m = 0; m < n; ++m) {
      const double a = -2 * pi * static_cast<double>((k * m) % n) / static_cast<double>(n);
      acc += x[m] * cd(std::cos(a), std::sin(a));
    }
    X[k] = acc;
  }
  return X;
}

inline std::vector<cd> unit_chips(const std::vector<double>& phases) {
  std::vector<cd> c;
  for (double p : phases) c.push_back(std::polar(1.0, p));
  return c;
}

// Aperiodic autocorrelation magnitudes for lags 0..n-1.
inline std::vector<double> aperiodic_acf(const std::vector<cd>& c) {
  const std::size_t n = c.size();
  std::vector<double> r(n);
  for (std::size_t lag = 0; lag < n; ++lag) {
    cd acc = 0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += c[i + lag] * std::conj(c[i]);
    r[lag] = std::abs(acc);
  }
  return r;
}

// Periodic (cyclic) autocorrelation magnitudes for lags 0..n-1.
inline std::vector<double> periodic_acf(const std::vector<cd>& c) {
  const std::size_t n = c.size();
  std::vector<double> r(n);
  for (std::size_t lag = 0; lag < n; ++lag) {
    cd acc = 0;
    for (std::size_t i = 0; i < n; ++i) acc += c[(i + lag) % n] * std::conj(c[i]);
    r[lag] = std::abs(acc);
  }
  return r;
}

// Instantaneous frequency in Hz from the phase difference of neighbours.
inline double inst_freq(const std::vector<cd>& x, std::size_t i, double fs) {
  return std::arg(x[i + 1] * std::conj(x[i])) * fs / (2 * pi);
}

// Least-squares slope of y against x.
inline double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

// Width of the band holding the central `frac` of the power, from a
// zero-padded direct periodogram. Frequencies in Hz.
inline double occupied_bandwidth(const std::vector<cd>& x, double fs, double frac, std::size_t n_fft) {
  std::vector<cd> padded(x);
  padded.resize(n_fft, cd(0, 0));
  const auto X = dft(padded);
  std::vector<double> p(n_fft);
  // Order bins from -fs/2 upward.
  for (std::size_t i = 0; i < n_fft; ++i) p[i] = std::norm(X[(i + n_fft / 2) % n_fft]);
  double total = 0;
  for (double v : p) total += v;
  const double tail = (1 - frac) / 2 * total;
  double acc = 0;
  std::size_t lo = 0, hi = n_fft - 1;
  for (std::size_t i = 0; i < n_fft; ++i) {
    acc += p[i];
    if (acc >= tail) {
      lo = i;
      break;
    }
  }
  acc = 0;
  for (std::size_t i = n_fft; i-- > 0;) {
    acc += p[i];
    if (acc >= tail) {
      hi = i;
      break;
    }
  }
  return static_cast<double>(hi - lo + 1) * fs / static_cast<double>(n_fft);
}

// Exhaustive max pooling: out[t][f] = max over k < n_pool of in[t*n_pool + k][f].
inline std::vector<std::vector<double>> pool(const std::vector<std::vector<double>>& cols, int dim_t, int n_pool) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(dim_t));
  for (int t = 0; t < dim_t; ++t) {
    const auto& first = cols[static_cast<std::size_t>(t * n_pool)];
    out[static_cast<std::size_t>(t)] = first;
    for (int k = 1; k < n_pool; ++k) {
      const auto& c = cols[static_cast<std::size_t>(t * n_pool + k)];
      for (std::size_t f = 0; f < c.size(); ++f)
        if (c[f] > out[static_cast<std::size_t>(t)][f]) out[static_cast<std::size_t>(t)][f] = c[f];
    }
  }
  return out;
}

// Box as corner coordinates.
struct Rect {
  double x0, y0, x1, y1;
};

inline Rect rect_of(double xc, double yc, double w, double h) { return {xc - w / 2, yc - h / 2, xc + w / 2, yc + h / 2}; }

inline double iou(const Rect& a, const Rect& b) {
  const double ix0 = a.x0 > b.x0 ? a.x0 : b.x0;
  const double iy0 = a.y0 > b.y0 ? a.y0 : b.y0;
  const double ix1 = a.x1 < b.x1 ? a.x1 : b.x1;
  const double iy1 = a.y1 < b.y1 ? a.y1 : b.y1;
  const double inter = (ix1 > ix0 && iy1 > iy0) ? (ix1 - ix0) * (iy1 - iy0) : 0.0;
  const double ua = (a.x1 - a.x0) * (a.y1 - a.y0) + (b.x1 - b.x0) * (b.y1 - b.y0) - inter;
  return inter / ua;
}

// Greedy matcher by repeated selection: pick the unvisited detection of
// highest confidence (lowest index on ties), give it the free ground
// truth of highest IoU >= thresh (lowest index on ties).
inline std::vector<bool> match(const std::vector<Rect>& det, const std::vector<double>& conf,
                               const std::vector<Rect>& gt, double thresh) {
  std::vector<bool> tp(det.size(), false), visited(det.size(), false), used(gt.size(), false);
  for (std::size_t step = 0; step < det.size(); ++step) {
    std::size_t pick = det.size();
    for (std::size_t d = 0; d < det.size(); ++d)
      if (!visited[d] && (pick == det.size() || conf[d] > conf[pick])) pick = d;
    visited[pick] = true;
    std::optional<std::size_t> g_best;
    double best = 0;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (used[g]) continue;
      const double v = iou(det[pick], gt[g]);
      if (v >= thresh && (!g_best || v > best)) {
        g_best = g;
        best = v;
      }
    }
    if (g_best) {
      used[*g_best] = true;
      tp[pick] = true;
    }
  }
  return tp;
}

// AP from the precision-recall definition: sum over each distinct recall
// level r_k of (r_k - r_{k-1}) * max{precision_i : recall_i >= r_k}.
inline double ap(const std::vector<bool>& ranked, long n_gt) {
  if (n_gt == 0) return 0;
  std::vector<double> prec, rec;
  long tp = 0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (ranked[i]) ++tp;
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    rec.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  std::vector<double> levels;
  for (double r : rec)
    if (r > 0 && (levels.empty() || r != levels.back())) levels.push_back(r);
  double sum = 0, prev = 0;
  for (double r : levels) {
    double pmax = 0;
    for (std::size_t i = 0; i < rec.size(); ++i)
      if (rec[i] >= r) pmax = std::max(pmax, prec[i]);
    sum += (r - prev) * pmax;
    prev = r;
  }
  return sum;
}

}  // namespace oracle
