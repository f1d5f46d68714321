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
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raddet/error.hpp"
#include "raddet/types.hpp"

namespace raddet {

enum class CodeFamily { Barker, Frank, P1, P2, P3, P4, Px, ZadoffChu };

inline std::string_view family_name(CodeFamily f) {
  switch (f) {
    case CodeFamily::Barker: return "Barker";
    case CodeFamily::Frank: return "Frank";
    case CodeFamily::P1: return "P1";
    case CodeFamily::P2: return "P2";
    case CodeFamily::P3: return "P3";
    case CodeFamily::P4: return "P4";
    case CodeFamily::Px: return "Px";
    case CodeFamily::ZadoffChu: return "ZadoffChu";
  }
  return "?";
}

inline std::optional<CodeFamily> code_family_for(RadarClass c) {
  switch (c) {
    case RadarClass::Barker: return CodeFamily::Barker;
    case RadarClass::Frank: return CodeFamily::Frank;
    case RadarClass::P1: return CodeFamily::P1;
    case RadarClass::P2: return CodeFamily::P2;
    case RadarClass::P3: return CodeFamily::P3;
    case RadarClass::P4: return CodeFamily::P4;
    case RadarClass::Px: return CodeFamily::Px;
    case RadarClass::ZadoffChu: return CodeFamily::ZadoffChu;
    default: return std::nullopt;
  }
}

struct PhaseCode {
  CodeFamily family = CodeFamily::Barker;
  int n_chip = 0;
  int root = 0;               // Zadoff-Chu root; 0 for other families
  std::vector<double> chips;  // radians, wrapped to [-pi, pi)
};

// Wraps an angle to [-pi, pi).
inline double wrap_phase(double x) {
  double y = std::fmod(x + kPi, kTwoPi);
  if (y < 0) y += kTwoPi;
  y -= kPi;
  return y >= kPi ? -kPi : y;
}

// Chip counts drawn from for each family.
inline std::vector<int> allowed_chip_counts(CodeFamily f) {
  switch (f) {
    case CodeFamily::Barker: return {5, 7, 11, 13};
    case CodeFamily::Frank:
    case CodeFamily::P1:
    case CodeFamily::Px: return {4, 9, 16};
    case CodeFamily::P2: return {4, 16};
    case CodeFamily::P3:
    case CodeFamily::P4: return {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    case CodeFamily::ZadoffChu: return {3, 5, 7, 9, 11, 13, 15};
  }
  return {};
}

// Zadoff-Chu roots valid for a length: u in [1, n-1] with gcd(u, n) = 1.
// A length-1 sequence has the single root 1.
inline std::vector<int> zadoff_chu_roots(int n_chip) {
  if (n_chip == 1) return {1};
  std::vector<int> roots;
  for (int u = 1; u < n_chip; ++u)
    if (std::gcd(u, n_chip) == 1) roots.push_back(u);
  return roots;
}

namespace detail {

inline std::string join_ints(const std::vector<int>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "}";
}

inline std::vector<double> barker_phases(int n) {
  std::vector<int> bits;
  switch (n) {
    case 5: bits = {0, 0, 0, 1, 0}; break;
    case 7: bits = {0, 0, 0, 1, 1, 0, 1}; break;
    case 11: bits = {0, 0, 0, 1, 1, 1, 0, 1, 1, 0, 1}; break;
    case 13: bits = {0, 0, 0, 0, 0, 1, 1, 0, 0, 1, 0, 1, 0}; break;
    default: break;
  }
  std::vector<double> out(bits.size());
  std::transform(bits.begin(), bits.end(), out.begin(), [](int b) { return b * kPi; });
  return out;
}

inline int exact_sqrt(int n) {
  int m = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return m * m == n ? m : 0;
}

}  // namespace detail

// Phase sequence of a polyphase or biphase pulse-compression code.
//
// M x M codes (Frank, P1, P2, Px) are read row-major with i the row
// (frequency group) and j the sample within the group, both 1-based:
//   Frank  (2pi/M)(i-1)(j-1)
//   P1     -(pi/M)[M-(2i-1)][(i-1)M+(j-1)]
//   P2     (pi/(2M))(M+1-2i)(M+1-2j)
//   Px     M even: (2pi/M)[(M+1)/2-j][(M+1)/2-i]
//          M odd:  (2pi/M)[M/2-i][(M+1)/2-j]
// Length-N codes, k = 0..N-1:
//   P3     (pi/N) k^2
//   P4     (pi/N) k^2 - pi k
//   ZC     -pi u k(k+1)/N, N odd, gcd(u, N) = 1
inline PhaseCode code_generate(CodeFamily family, int n_chip, std::optional<int> root = std::nullopt) {
  auto allowed = allowed_chip_counts(family);
  const bool zc_unit = family == CodeFamily::ZadoffChu && n_chip == 1;
  if (!zc_unit && std::find(allowed.begin(), allowed.end(), n_chip) == allowed.end()) {
    throw DomainError("invalid n_chip " + std::to_string(n_chip) + " for " +
                      std::string(family_name(family)) + " code; allowed " +
                      detail::join_ints(allowed));
  }
  if (root && family != CodeFamily::ZadoffChu)
    throw DomainError("root applies only to Zadoff-Chu codes");

  PhaseCode code;
  code.family = family;
  code.n_chip = n_chip;
  code.chips.resize(static_cast<std::size_t>(n_chip));
  const double n = n_chip;

  switch (family) {
    case CodeFamily::Barker:
      code.chips = detail::barker_phases(n_chip);
      break;
    case CodeFamily::Frank:
    case CodeFamily::P1:
    case CodeFamily::P2:
    case CodeFamily::Px: {
      const int m = detail::exact_sqrt(n_chip);
      const double M = m;
      for (int i = 1; i <= m; ++i) {
        for (int j = 1; j <= m; ++j) {
          double p = 0;
          if (family == CodeFamily::Frank) {
            p = kTwoPi / M * (i - 1) * (j - 1);
          } else if (family == CodeFamily::P1) {
            p = -kPi / M * (M - (2.0 * i - 1)) * ((i - 1) * M + (j - 1));
          } else if (family == CodeFamily::P2) {
            p = kPi / (2.0 * M) * (M + 1 - 2.0 * i) * (M + 1 - 2.0 * j);
          } else if (m % 2 == 0) {
            p = kTwoPi / M * ((M + 1) / 2.0 - j) * ((M + 1) / 2.0 - i);
          } else {
            p = kTwoPi / M * (M / 2.0 - i) * ((M + 1) / 2.0 - j);
          }
          code.chips[static_cast<std::size_t>((i - 1) * m + (j - 1))] = p;
        }
      }
      break;
    }
    case CodeFamily::P3:
      for (int k = 0; k < n_chip; ++k) code.chips[static_cast<std::size_t>(k)] = kPi / n * k * k;
      break;
    case CodeFamily::P4:
      for (int k = 0; k < n_chip; ++k)
        code.chips[static_cast<std::size_t>(k)] = kPi / n * k * k - kPi * k;
      break;
    case CodeFamily::ZadoffChu: {
      const int u = root.value_or(1);
      if (u < 1 || std::gcd(u, n_chip) != 1 || (n_chip > 1 && u >= n_chip))
        throw DomainError("Zadoff-Chu root " + std::to_string(u) + " must lie in [1, " +
                          std::to_string(n_chip - 1) + "] and be coprime with " +
                          std::to_string(n_chip));
      code.root = u;
      // Reduce the integer product modulo 2N before scaling to keep the
      // argument small and exact.
      for (int k = 0; k < n_chip; ++k) {
        const long long q = (static_cast<long long>(u) * k * (k + 1)) % (2LL * n_chip);
        code.chips[static_cast<std::size_t>(k)] = -kPi * static_cast<double>(q) / n;
      }
      break;
    }
  }
  for (auto& c : code.chips) c = wrap_phase(c);
  return code;
}

}  // namespace raddet
