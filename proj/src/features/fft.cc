// features/fft.cc

// Copyright 2026  The gemspoof Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "features/fft.h"

#include <cmath>
#include <numbers>
#include <utility>

#include "base/gem-common.h"

namespace gem {

bool IsPowerOfTwo(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void Fft(std::span<std::complex<double>> a) {
  const size_t n = a.size();
  if (!IsPowerOfTwo(n))
    throw InputError(internal::StrCat("FFT size ", n, " is not a power of two"));

  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * std::numbers::pi / static_cast<double>(len);
    const size_t half = len / 2;
    for (size_t start = 0; start < n; start += len) {
      for (size_t k = 0; k < half; ++k) {
        // Twiddles are evaluated directly rather than by recurrence, which
        // keeps the error near machine precision for every size.
        std::complex<double> w(std::cos(angle * k), std::sin(angle * k));
        std::complex<double> u = a[start + k];
        std::complex<double> v = a[start + k + half] * w;
        a[start + k] = u + v;
        a[start + k + half] = u - v;
      }
    }
  }
}

std::vector<double> PowerSpectrum(std::span<const double> frame,
                                  size_t fft_size) {
  if (frame.size() > fft_size)
    throw InputError(internal::StrCat("frame of ", frame.size(),
                                      " samples exceeds FFT size ", fft_size));
  std::vector<std::complex<double>> buf(fft_size);
  for (size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i];
  Fft(buf);
  const size_t half = fft_size / 2;
  const double n = static_cast<double>(fft_size);
  std::vector<double> power(half + 1);
  for (size_t k = 0; k <= half; ++k) {
    double p = std::norm(buf[k]) / n;
    power[k] = (k == 0 || k == half) ? p : 2.0 * p;
  }
  return power;
}

}  // namespace gem
