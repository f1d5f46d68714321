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

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <stdexcept>

namespace raddet {

namespace detail {
// The FFTW planner is not thread-safe; execution on distinct arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

// Forward complex DFT of a fixed length with owned, aligned buffers.
// FFTW_ESTIMATE planning is deterministic, so every instance of a given
// length runs the same codelets and produces identical output.
class ForwardFft {
 public:
  explicit ForwardFft(std::size_t n) : n_(n) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    in_ = fftw_alloc_complex(n);
    out_ = fftw_alloc_complex(n);
    if (!in_ || !out_) {
      fftw_free(in_);
      fftw_free(out_);
      throw std::bad_alloc();
    }
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_, out_, FFTW_FORWARD, FFTW_ESTIMATE);
  }

  ~ForwardFft() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }

  ForwardFft(const ForwardFft&) = delete;
  ForwardFft& operator=(const ForwardFft&) = delete;

  std::size_t size() const { return n_; }

  std::span<std::complex<double>> input() {
    return {reinterpret_cast<std::complex<double>*>(in_), n_};
  }

  // Out-of-place transform of input(); the input buffer is preserved.
  std::span<const std::complex<double>> execute() {
    fftw_execute(plan_);
    return {reinterpret_cast<const std::complex<double>*>(out_), n_};
  }

 private:
  std::size_t n_;
  fftw_complex* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

}  // namespace raddet
