// features/fft-test.cc

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

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/rng.h"
#include "features/fft.h"

namespace gem {

namespace {

// O(N^2) DFT in long double.
std::vector<std::complex<long double>> NaiveDft(
    const std::vector<std::complex<double>> &x) {
  const size_t n = x.size();
  std::vector<std::complex<long double>> out(n);
  const long double two_pi = 2.0L * std::numbers::pi_v<long double>;
  for (size_t k = 0; k < n; ++k) {
    std::complex<long double> acc = 0;
    for (size_t t = 0; t < n; ++t) {
      long double ang = -two_pi * static_cast<long double>((k * t) % n) / n;
      acc += std::complex<long double>(x[t].real(), x[t].imag()) *
             std::complex<long double>(std::cos(ang), std::sin(ang));
    }
    out[k] = acc;
  }
  return out;
}

}  // namespace

TEST_CASE("fft matches a naive dft") {
  Rng rng(5);
  for (size_t n : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::complex<double>> x(n);
      for (auto &v : x) v = {rng.Gaussian(), rng.Gaussian()};
      auto ref = NaiveDft(x);
      Fft(x);
      long double scale = 0;
      for (const auto &v : ref) scale = std::max(scale, std::abs(v));
      for (size_t k = 0; k < n; ++k) {
        long double err = std::abs(std::complex<long double>(x[k].real(), x[k].imag()) - ref[k]);
        CHECK(static_cast<double>(err / scale) < 1e-9);
      }
    }
  }
}

TEST_CASE("fft rejects sizes that are not powers of two") {
  std::vector<std::complex<double>> x(12);
  CHECK_THROWS_AS(Fft(x), InputError);
  CHECK(IsPowerOfTwo(512));
  CHECK_FALSE(IsPowerOfTwo(400));
  CHECK_FALSE(IsPowerOfTwo(0));
}

TEST_CASE("power spectrum satisfies parseval") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> frame(400);
    long double energy = 0;
    for (double &v : frame) {
      v = rng.Uniform() * 2.0 - 1.0;
      energy += static_cast<long double>(v) * v;
    }
    auto p = PowerSpectrum(frame, 512);
    REQUIRE(p.size() == 257);
    long double sum = 0;
    for (double v : p) sum += v;
    CHECK(testing::RelDiff(static_cast<double>(sum), static_cast<double>(energy)) < 1e-9);
  }
}

TEST_CASE("power spectrum of a bin-centred tone lands in that bin") {
  const size_t n = 64;
  std::vector<double> frame(n);
  for (size_t t = 0; t < n; ++t)
    frame[t] = std::cos(2.0 * std::numbers::pi * 5.0 * t / n);
  auto p = PowerSpectrum(frame, n);
  for (size_t k = 0; k < p.size(); ++k) {
    if (k == 5) CHECK(p[k] == doctest::Approx(n / 2.0).epsilon(1e-12));
    else CHECK(std::abs(p[k]) < 1e-20);
  }
}

}  // namespace gem
