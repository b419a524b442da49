// tests/oracles.h

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

#ifndef GEM_TESTS_ORACLES_H_
#define GEM_TESTS_ORACLES_H_

// Reference computations that share no code with the library: extended
// precision arithmetic and brute-force counting.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace gem::testing {

using Real = long double;

inline Real OracleDot(std::span<const double> a, std::span<const double> b) {
  Real s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += static_cast<Real>(a[i]) * b[i];
  return s;
}

inline double OracleSigmoid(Real z) {
  return static_cast<double>(1.0L / (1.0L + std::exp(-z)));
}

/// Softmax of z / t in extended precision, without max subtraction.
inline std::array<double, 4> OracleSoftmax(const std::array<double, 4> &z, double t) {
  std::array<Real, 4> e;
  Real sum = 0;
  for (int i = 0; i < 4; ++i) sum += e[i] = std::exp(static_cast<Real>(z[i]) / t);
  std::array<double, 4> p;
  for (int i = 0; i < 4; ++i) p[i] = static_cast<double>(e[i] / sum);
  return p;
}

/// EER in percent by direct counting at every candidate threshold (each
/// observed score, then +infinity): FAR(t) = #{spoof >= t} / n_spoof and
/// FRR(t) = #{bonafide < t} / n_bonafide.  Takes the first candidate with
/// FAR <= FRR and interpolates linearly from the one before it.
inline double OracleEer(std::span<const double> bona, std::span<const double> spoof) {
  std::vector<double> cand(bona.begin(), bona.end());
  cand.insert(cand.end(), spoof.begin(), spoof.end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  cand.push_back(std::numeric_limits<double>::infinity());
  auto far = [&](double t) {
    size_t n = 0;
    for (double s : spoof) n += s >= t;
    return static_cast<Real>(n) / spoof.size();
  };
  auto frr = [&](double t) {
    size_t n = 0;
    for (double s : bona) n += s < t;
    return static_cast<Real>(n) / bona.size();
  };
  for (size_t i = 0; i < cand.size(); ++i) {
    Real fa = far(cand[i]), fr = frr(cand[i]);
    if (fa - fr > 0) continue;
    if (fa == fr || i == 0) return static_cast<double>(100 * fa);
    Real pa = far(cand[i - 1]), pr = frr(cand[i - 1]);
    Real d0 = pa - pr, d1 = fa - fr;
    Real alpha = d0 / (d0 - d1);
    return static_cast<double>(100 * (pa + alpha * (fa - pa)));
  }
  return 100.0;  // unreachable: +infinity has FAR = 0
}

}  // namespace gem::testing

#endif  // GEM_TESTS_ORACLES_H_
