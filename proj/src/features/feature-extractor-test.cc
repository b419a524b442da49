// features/feature-extractor-test.cc

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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/kv-config.h"
#include "base/rng.h"
#include "base/text-utils.h"
#include "features/feature-extractor.h"

namespace gem {

namespace {

using Real = long double;

Waveform Tone(double hz, double amp, double seconds, int rate = 16000) {
  Waveform w;
  w.sample_rate = rate;
  size_t n = static_cast<size_t>(seconds * rate);
  for (size_t t = 0; t < n; ++t)
    w.samples.push_back(amp * std::sin(2.0 * std::numbers::pi * hz * t / rate));
  return w;
}

// Independent front end: direct DFT per frame, triangles written as
// min(rise, fall), two-pass mean and standard deviation.
std::vector<double> OracleFeatures(const Waveform &w, const FeatureConfig &c) {
  const int rate = w.sample_rate;
  const size_t len = static_cast<size_t>(std::lround(rate * c.frame_len_ms / 1000.0));
  const size_t hop = static_cast<size_t>(std::lround(rate * c.hop_ms / 1000.0));
  const size_t n_fft = c.fft_size, bins = n_fft / 2 + 1;
  const Real pi = std::numbers::pi_v<Real>;
  auto mel = [](Real hz) { return 2595.0L * std::log10(1.0L + hz / 700.0L); };
  auto inv = [](Real m) { return 700.0L * (std::pow(10.0L, m / 2595.0L) - 1.0L); };
  const int nb = c.n_bands;
  std::vector<Real> edge(nb + 2);
  for (int i = 0; i < nb + 2; ++i) edge[i] = inv(mel(rate / 2.0L) * i / (nb + 1));

  std::vector<std::vector<Real>> logs;
  for (size_t start = 0; start + len <= w.samples.size(); start += hop) {
    std::vector<Real> x(len);
    for (size_t i = 0; i < len; ++i)
      x[i] = w.samples[start + i] * (0.54L - 0.46L * std::cos(2 * pi * i / (len - 1)));
    std::vector<Real> power(bins);
    for (size_t k = 0; k < bins; ++k) {
      Real re = 0, im = 0;
      for (size_t t = 0; t < len; ++t) {
        Real a = -2 * pi * static_cast<Real>((k * t) % n_fft) / n_fft;
        re += x[t] * std::cos(a);
        im += x[t] * std::sin(a);
      }
      Real mag = (re * re + im * im) / n_fft;
      power[k] = (k == 0 || k == n_fft / 2) ? mag : 2 * mag;
    }
    std::vector<Real> row(nb);
    for (int b = 0; b < nb; ++b) {
      Real e = 0;
      for (size_t k = 0; k < bins; ++k) {
        Real f = static_cast<Real>(k) * rate / n_fft;
        Real rise = (f - edge[b]) / (edge[b + 1] - edge[b]);
        Real fall = (edge[b + 2] - f) / (edge[b + 2] - edge[b + 1]);
        Real wgt = std::max<Real>(0, std::min(rise, fall));
        e += wgt * power[k];
      }
      row[b] = std::log(e + static_cast<Real>(c.floor_eps));
    }
    logs.push_back(row);
  }
  std::vector<double> out(2 * nb);
  for (int b = 0; b < nb; ++b) {
    Real mean = 0;
    for (const auto &r : logs) mean += r[b];
    mean /= logs.size();
    Real var = 0;
    for (const auto &r : logs) var += (r[b] - mean) * (r[b] - mean);
    out[b] = static_cast<double>(mean);
    out[nb + b] = static_cast<double>(std::sqrt(var / logs.size()));
  }
  return out;
}

}  // namespace

TEST_CASE("default config") {
  FeatureConfig c;
  CHECK(c.FrameLength(16000) == 400);
  CHECK(c.FrameShift(16000) == 160);
  CHECK(c.Dim() == 48);
  CHECK_NOTHROW(c.Validate(16000));
  FeatureConfig small = c;
  small.fft_size = 256;
  CHECK_THROWS_AS(small.Validate(16000), ConfigError);
  FeatureConfig odd = c;
  odd.fft_size = 500;
  CHECK_THROWS_AS(odd.Validate(16000), ConfigError);
  FeatureConfig zero = c;
  zero.n_bands = 0;
  CHECK_THROWS_AS(zero.Validate(16000), ConfigError);

  auto kv = KeyValueConfig::Parse("features.n_bands = 12\nfeatures.hop_ms = 20\n");
  FeatureConfig f = FeatureConfig::FromConfig(kv, "features.");
  CHECK(f.n_bands == 12);
  CHECK(f.hop_ms == 20.0);
  CHECK(f.Dim() == 24);
}

TEST_CASE("mel warp") {
  CHECK(MelFilterbank::HzToMel(0) == 0.0);
  CHECK(MelFilterbank::HzToMel(700) == doctest::Approx(2595.0 * std::log10(2.0)));
  for (double hz : {10.0, 440.0, 3000.0, 8000.0})
    CHECK(MelFilterbank::MelToHz(MelFilterbank::HzToMel(hz)) ==
          doctest::Approx(hz).epsilon(1e-12));
}

TEST_CASE("all-zero waveform") {
  Waveform w;
  w.samples.assign(16000, 0.0);
  FeatureConfig c;
  FeatureVector v = Extract(w, c);
  REQUIRE(v.dim() == 48);
  for (int b = 0; b < 24; ++b) {
    CHECK(v.values[b] == std::log(1e-10));
    CHECK(v.values[24 + b] == 0.0);
  }
}

TEST_CASE("shorter than one frame") {
  Waveform w;
  w.samples.assign(399, 0.1);
  CHECK_THROWS_AS(Extract(w, FeatureConfig{}), InputError);
  w.samples.assign(400, 0.1);
  CHECK(LogBandEnergies(w, FeatureConfig{}).size() == 1);
  w.samples.assign(400 + 159, 0.1);
  CHECK(LogBandEnergies(w, FeatureConfig{}).size() == 1);
  w.samples.assign(400 + 160, 0.1);
  CHECK(LogBandEnergies(w, FeatureConfig{}).size() == 2);
}

TEST_CASE("tone at a band centre peaks in that band and matches the oracle") {
  FeatureConfig c;
  MelFilterbank fb(c, 16000);
  for (int k : {2, 5, 9, 14, 19, 22}) {
    CAPTURE(k);
    Waveform w = Tone(fb.CenterHz(k), 0.5, 0.1);
    FeatureVector v = Extract(w, c);
    auto means = std::span<const double>(v.values).first(24);
    CHECK(std::max_element(means.begin(), means.end()) - means.begin() == k);
    std::vector<double> ref = OracleFeatures(w, c);
    for (size_t d = 0; d < 24; ++d) CHECK(std::abs(v.values[d] - ref[d]) < 1e-9);
    for (size_t d = 24; d < 48; ++d) CHECK(std::abs(v.values[d] - ref[d]) < 1e-7);
  }
}

TEST_CASE("random audio matches the oracle") {
  Rng rng(8);
  FeatureConfig c;
  c.n_bands = 10;
  c.fft_size = 256;
  c.frame_len_ms = 16;
  c.hop_ms = 8;
  Waveform w;
  w.sample_rate = 8000;
  for (int t = 0; t < 1200; ++t) w.samples.push_back(0.3 * (2 * rng.Uniform() - 1));
  FeatureVector v = Extract(w, c);
  std::vector<double> ref = OracleFeatures(w, c);
  for (size_t d = 0; d < v.dim(); ++d) CHECK(std::abs(v.values[d] - ref[d]) < 1e-9);
}

TEST_CASE("extraction is deterministic") {
  Rng rng(1);
  Waveform w;
  for (int t = 0; t < 8000; ++t) w.samples.push_back(0.2 * rng.Gaussian() / 4);
  FeatureVector a = Extract(w, FeatureConfig{});
  FeatureVector b = Extract(w, FeatureConfig{});
  CHECK(a == b);
}

TEST_CASE("amplitude scaling shifts mean log energy by 2 log c") {
  Rng rng(4);
  FeatureConfig c;
  c.floor_eps = 1e-30;
  for (int trial = 0; trial < 5; ++trial) {
    Waveform w;
    for (int t = 0; t < 4000; ++t)
      w.samples.push_back(0.1 * std::sin(0.05 * t) + 0.05 * (2 * rng.Uniform() - 1));
    const double scale = 0.1 + 1.5 * rng.Uniform();
    Waveform s = w;
    for (double &x : s.samples) x *= scale;
    FeatureVector a = Extract(w, c), b = Extract(s, c);
    for (int d = 0; d < 24; ++d)
      CHECK(std::abs(b.values[d] - a.values[d] - 2 * std::log(scale)) < 1e-6);
    for (int d = 24; d < 48; ++d) CHECK(std::abs(b.values[d] - a.values[d]) < 1e-6);
  }
}

TEST_CASE("feature table and cache") {
  FeatureTable t;
  t.Add("a", {{1.0, 2.5, -3.25}});
  t.Add("b", {{0.1234567891234, 1e-12, 7.0}});
  CHECK_THROWS_AS(t.Add("a", {{0, 0, 0}}), ValidationError);
  CHECK_THROWS_AS(t.Add("c", {{0, 0}}), ValidationError);
  CHECK(t.Get("b").values[2] == 7.0);
  CHECK_THROWS_AS(t.Get("zz"), ValidationError);
  CHECK(FormatFeatureTable(t) == "a\t1\t2.5\t-3.25\nb\t0.123456789\t1e-12\t7\n");

  testing::TempDir dir;
  WriteFeatureTable(t, dir / "f.tsv");
  FeatureTable back = ReadFeatureTable(dir / "f.tsv");
  CHECK(back.ids() == t.ids());
  CHECK(back.Get("a") == t.Get("a"));
  WriteFileAtomic(dir / "bad.tsv", "a\t1\tx\n");
  CHECK_THROWS_AS(ReadFeatureTable(dir / "bad.tsv"), FormatError);
}

TEST_CASE("normalizer") {
  std::vector<FeatureVector> rows = {{{1, 5, 3}}, {{3, 5, -1}}, {{5, 5, 1}}};
  std::vector<const FeatureVector *> ptrs;
  for (const auto &r : rows) ptrs.push_back(&r);
  FeatureNormalizer n = FeatureNormalizer::Fit(ptrs);
  CHECK(n.mean == std::vector<double>{3, 5, 1});
  CHECK(n.stddev[1] == 0.0);
  FeatureVector z = n.Apply(rows[0]);
  CHECK(z.values[0] == doctest::Approx(-2.0 / std::sqrt(8.0 / 3.0)));
  CHECK(z.values[1] == 0.0);
  FeatureNormalizer back = ParseNormalizer(FormatNormalizer(n), "n");
  CHECK(back.mean == n.mean);
  CHECK(back.stddev == n.stddev);
  CHECK_THROWS_AS(ParseNormalizer("junk\n", "n"), FormatError);
  CHECK_THROWS_AS(n.Apply({{1, 2}}), InputError);
}

}  // namespace gem
