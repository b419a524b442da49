// metrics/eer-test.cc

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
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/rng.h"
#include "metrics/eer.h"

namespace gem {

namespace {

struct ScoreSet {
  std::vector<double> bona, spoof;
};

// Sizes 2..200 per class; a third of the sets are quantised to force ties.
ScoreSet RandomSet(Rng &rng) {
  ScoreSet s;
  size_t nb = 2 + rng.UniformInt(199), ns = 2 + rng.UniformInt(199);
  double gap = rng.Gaussian(0, 2);
  bool ties = rng.UniformInt(3) == 0;
  auto draw = [&](double mean) {
    double v = rng.Gaussian(mean, 1);
    return ties ? std::round(v * 4) / 4 : v;
  };
  for (size_t i = 0; i < nb; ++i) s.bona.push_back(draw(gap));
  for (size_t i = 0; i < ns; ++i) s.spoof.push_back(draw(0));
  return s;
}

}  // namespace

TEST_CASE("eer examples") {
  CHECK(ComputeEer(std::vector<double>{0.9, 0.8, 0.7}, std::vector<double>{0.1, 0.6}).eer ==
        0.0);
  std::vector<double> same = {0.3, 0.5, 0.5, 0.9};
  CHECK(std::abs(ComputeEer(same, same).eer - 50.0) < 1e-9);

  std::vector<double> b = {0.9, 0.8, 0.3}, s = {0.7, 0.2, 0.1};
  double eer = ComputeEer(b, s).eer;
  CHECK(eer == doctest::Approx(testing::OracleEer(b, s)).epsilon(1e-14));
  // At t = 0.7 one of three spoofs is accepted and one of three bona fide
  // trials rejected.
  CHECK(eer == doctest::Approx(100.0 / 3).epsilon(1e-14));

  // All spoof scores above all bona fide scores.
  CHECK(ComputeEer(std::vector<double>{0.1, 0.2}, std::vector<double>{0.8, 0.9}).eer == 100.0);
}

TEST_CASE("eer errors") {
  std::vector<double> one = {0.5}, none;
  CHECK_THROWS_AS(ComputeEer(one, none), EvaluationError);
  CHECK_THROWS_AS(ComputeEer(none, one), EvaluationError);
  std::vector<double> bad = {0.5, std::nan("")};
  CHECK_THROWS_AS(ComputeEer(bad, one), EvaluationError);
  std::vector<double> inf = {std::numeric_limits<double>::infinity()};
  CHECK_THROWS_AS(ComputeEer(one, inf), EvaluationError);
  std::vector<ScoredTrial> only_bona = {{"a", 0.1, Label::kBonafide, Emotion::kSad, "bonafide"}};
  CHECK_THROWS_AS(Eer(only_bona), EvaluationError);
}

TEST_CASE("sweep shape") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    ScoreSet s = RandomSet(rng);
    auto pts = SweepThresholds(s.bona, s.spoof);
    CHECK(pts.front().far == 1.0);
    CHECK(pts.front().frr == 0.0);
    CHECK(std::isinf(pts.back().threshold));
    CHECK(pts.back().far == 0.0);
    CHECK(pts.back().frr == 1.0);
    for (size_t i = 1; i < pts.size(); ++i) {
      CHECK(pts[i].threshold > pts[i - 1].threshold);
      CHECK(pts[i].far <= pts[i - 1].far);
      CHECK(pts[i].frr >= pts[i - 1].frr);
    }
  }
}

TEST_CASE("eer equals the brute force oracle") {
  Rng rng(2026);
  for (int trial = 0; trial < 1000; ++trial) {
    ScoreSet s = RandomSet(rng);
    double got = ComputeEer(s.bona, s.spoof).eer;
    CHECK(std::abs(got - testing::OracleEer(s.bona, s.spoof)) < 1e-12);
  }
}

TEST_CASE("eer invariances") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    ScoreSet s = RandomSet(rng);
    // Quantise to a 1e-6 grid so no increasing map below can merge values.
    for (auto *v : {&s.bona, &s.spoof})
      for (double &x : *v) x = std::round(x * 1e6) / 1e6;
    const double base = ComputeEer(s.bona, s.spoof).eer;
    CHECK(base >= 0.0);
    CHECK(base <= 100.0);

    auto mapped = [&](auto f) {
      ScoreSet t = s;
      for (double &x : t.bona) x = f(x);
      for (double &x : t.spoof) x = f(x);
      return ComputeEer(t.bona, t.spoof).eer;
    };
    CHECK(mapped([](double x) { return std::exp(x); }) == base);
    CHECK(mapped([](double x) { return 3 * x + 7; }) == base);

    // Random strictly increasing piecewise-linear map.
    std::vector<double> knots_x = {-1e9}, knots_y = {-1e9};
    for (int k = 0; k < 12; ++k) {
      knots_x.push_back(-6 + k + rng.Uniform() * 0.5);
      knots_y.push_back(knots_y.back() + 1e-3 + 5 * rng.Uniform() + (k == 0 ? 1e9 : 0));
    }
    knots_x.push_back(1e9);
    knots_y.push_back(knots_y.back() + 1e9);
    auto pwl = [&](double x) {
      size_t i = std::upper_bound(knots_x.begin(), knots_x.end(), x) - knots_x.begin();
      double a = (x - knots_x[i - 1]) / (knots_x[i] - knots_x[i - 1]);
      return knots_y[i - 1] + a * (knots_y[i] - knots_y[i - 1]);
    };
    CHECK(mapped(pwl) == base);

    // Negate and swap the classes.
    std::vector<double> nb, ns;
    for (double x : s.spoof) nb.push_back(-x);
    for (double x : s.bona) ns.push_back(-x);
    CHECK(std::abs(ComputeEer(nb, ns).eer - base) < 1e-9);

    // Order never matters.
    ScoreSet p = s;
    std::reverse(p.bona.begin(), p.bona.end());
    std::rotate(p.spoof.begin(), p.spoof.begin() + 1, p.spoof.end());
    CHECK(ComputeEer(p.bona, p.spoof).eer == base);
  }
}

TEST_CASE("separable and identical sets") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> b, s;
    size_t n = 2 + rng.UniformInt(100);
    for (size_t i = 0; i < n; ++i) b.push_back(1.0 + rng.Uniform());
    for (size_t i = 0; i < 2 + rng.UniformInt(100); ++i) s.push_back(rng.Uniform() * 0.999);
    CHECK(ComputeEer(b, s).eer == 0.0);
    std::vector<double> copy = b;
    std::reverse(copy.begin(), copy.end());
    CHECK(std::abs(ComputeEer(b, copy).eer - 50.0) < 1e-9);
  }
}

TEST_CASE("scored trial files") {
  std::vector<ScoredTrial> trials = {
      {"a", 0.25, Label::kBonafide, Emotion::kHappy, "bonafide"},
      {"b", -1.5, Label::kSpoof, Emotion::kSad, "f5tts"}};
  std::string text = FormatScoredTrials(trials);
  CHECK(text ==
        "utt_id\tscore\tlabel\temotion\tsource_system\n"
        "a\t0.25\tbonafide\thappy\tbonafide\n"
        "b\t-1.5\tspoof\tsad\tf5tts\n");
  testing::TempDir dir;
  WriteScoredTrials(trials, dir / "t.tsv");
  auto back = ReadScoredTrials(dir / "t.tsv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].score == -1.5);
  CHECK(back[1].emotion == Emotion::kSad);
  CHECK(back[1].label == Label::kSpoof);
  CHECK(Eer(back) == 0.0);
}

}  // namespace gem
