// base/rng.h

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

#ifndef GEM_BASE_RNG_H_
#define GEM_BASE_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace gem {

/// SplitMix64 finaliser.  Used to turn (seed, stream coordinates) into
/// well-separated seeds for independent generator streams.
std::uint64_t MixSeed(std::uint64_t x);

/// Seed for a named sub-stream, e.g. DeriveSeed(seed, "train-gate") or
/// DeriveSeed(seed, {expert, emotion, label}).
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view stream_name);
std::uint64_t DeriveSeed(std::uint64_t seed,
                         std::initializer_list<std::uint64_t> coords);

/// Deterministic random source.  The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; all derived draws (uniforms,
/// bounded integers, normals) are computed here rather than through the
/// implementation-defined <random> distributions, so results are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t NextU64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double Uniform();

  /// Uniform integer on [0, n), n >= 1, unbiased (rejection sampling).
  std::uint64_t UniformInt(std::uint64_t n);

  /// Standard normal via the Box-Muller transform.  Normals are produced in
  /// pairs; the second one is cached for the next call.
  double Gaussian();

  double Gaussian(double mean, double stddev) {
    return mean + stddev * Gaussian();
  }

 private:
  std::mt19937_64 engine_;
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace gem

#endif  // GEM_BASE_RNG_H_
