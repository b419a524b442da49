// ensemble/gated-ensemble-test.cc

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
#include <vector>

#include <limits>

#include "doctest.h"
#include "oracles.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/rng.h"
#include "ensemble/gated-ensemble.h"
#include "metrics/eer.h"

namespace gem {

namespace {

EmotionProbabilities RandomGating(Rng &rng) {
  EmotionLogits z;
  for (double &v : z.z) v = rng.Gaussian(0, 3);
  return Soften(z, std::pow(10.0, rng.Uniform() * 3 - 1));
}

LinearExpert RandomExpert(Rng &rng, size_t dim, const std::string &tag) {
  LinearExpert e{std::vector<double>(dim), rng.Gaussian(), tag};
  for (double &w : e.weights) w = rng.Gaussian(0, 0.5);
  return e;
}

ExpertRegistry RandomRegistry(Rng &rng, size_t dim) {
  ExpertRegistry reg;
  for (Emotion e : kAllEmotions) reg.Add(e, RandomExpert(rng, dim, SpecialistTag(e)));
  return reg;
}

GateModel RandomGate(Rng &rng, size_t dim, double scale = 1.0) {
  GateModel g = GateModel::Zero(dim);
  for (int k = 0; k < kNumEmotions; ++k) {
    for (double &w : g.weights[k]) w = rng.Gaussian(0, scale);
    g.bias[k] = rng.Gaussian(0, scale);
  }
  return g;
}

FeatureVector RandomX(Rng &rng, size_t dim) {
  FeatureVector x{std::vector<double>(dim)};
  for (double &v : x.values) v = rng.Gaussian();
  return x;
}

}  // namespace

TEST_CASE("fuse examples") {
  EmotionProbabilities uniform = Soften(EmotionLogits{}, 1.0);
  CHECK(Fuse({0.2, 0.4, 0.6, 0.8}, uniform) == 0.5);

  for (int k = 0; k < 4; ++k) {
    EmotionLogits z;
    z.z[k] = 1.0;
    EmotionProbabilities one_hot = Soften(z, 1e-6);
    ExpertScores s = {0.11, 0.52, 0.93, 0.34};
    CHECK(std::abs(Fuse(s, one_hot) - s[k]) < 1e-6);
  }

  Rng rng(1);
  for (int trial = 0; trial < 2000; ++trial) {
    ExpertScores s;
    for (double &v : s) v = rng.Gaussian();
    EmotionProbabilities e = RandomGating(rng);
    double ref = static_cast<double>(testing::OracleDot(s, e.p));
    CHECK(testing::RelDiff(Fuse(s, e), ref, 1e-12) < 1e-12);
  }
}

TEST_CASE("fuse errors") {
  EmotionProbabilities uniform = Soften(EmotionLogits{}, 1.0);
  CHECK_THROWS_AS(Fuse({0, std::nan(""), 0, 0}, uniform), InputError);
  CHECK_THROWS_AS(Fuse({0, std::numeric_limits<double>::infinity(), 0, 0}, uniform), InputError);
  EmotionProbabilities bad{{0.5, 0.5, 0.0, 0.0}};
  CHECK_THROWS_AS(Fuse({0, 0, 0, 0}, bad), InputError);
  EmotionProbabilities unnormalised{{0.3, 0.3, 0.3, 0.3}};
  CHECK_THROWS_AS(Fuse({0, 0, 0, 0}, unnormalised), InputError);
}

TEST_CASE("fuse convexity, linearity and uniform mean") {
  Rng rng(2);
  for (int trial = 0; trial < 10000; ++trial) {
    ExpertScores s;
    for (double &v : s) v = rng.Uniform();
    EmotionProbabilities e = RandomGating(rng);
    double y = Fuse(s, e);
    CHECK(y >= *std::min_element(s.begin(), s.end()));
    CHECK(y <= *std::max_element(s.begin(), s.end()));

    double a = rng.Gaussian(0, 3), b = rng.Gaussian(0, 3);
    ExpertScores t;
    for (int i = 0; i < 4; ++i) t[i] = a * s[i] + b;
    CHECK(std::abs(Fuse(t, e) - (a * y + b)) < 1e-12 * (1 + std::abs(a) + std::abs(b)));

    EmotionProbabilities uniform = Soften(EmotionLogits{}, 1.0);
    CHECK(Fuse(s, uniform) == (s[0] + s[1] + s[2] + s[3]) / 4);

    ExpertScores same = {s[0], s[0], s[0], s[0]};
    CHECK(Fuse(same, e) == s[0]);
  }
}

TEST_CASE("registry") {
  Rng rng(3);
  ExpertRegistry reg;
  reg.Add(Emotion::kNeutral, RandomExpert(rng, 3, "n"));
  CHECK_THROWS_AS(reg.Add(Emotion::kNeutral, RandomExpert(rng, 3, "n2")), ConfigError);
  CHECK_THROWS_AS(reg.Validate(), ConfigError);
  reg.Add(Emotion::kHappy, RandomExpert(rng, 3, "h"));
  reg.Add(Emotion::kAngry, ScoreTable{{"u1", 0.3}}, "angry.tsv");
  reg.Add(Emotion::kSad, RandomExpert(rng, 4, "s"));
  CHECK_THROWS_AS(reg.Validate(), ConfigError);

  ExpertRegistry tables;
  for (Emotion e : kAllEmotions)
    tables.Add(e, ScoreTable{{"u1", 0.1 * (Index(e) + 1)}, {"u2", 0.5}}, "t.tsv");
  CHECK_NOTHROW(tables.Validate());
  CHECK_FALSE(tables.NeedsFeatures());
  ExpertScores u1 = tables.ScoreAll("u1", {});
  CHECK(u1 == ExpertScores{0.1, 0.2, 0.1 * 3, 0.4});
  try {
    tables.ScoreAll("u3", {});
    FAIL("expected a validation error");
  } catch (const ValidationError &e) {
    CHECK(std::string(e.what()).find("u3") != std::string::npos);
  }
}

TEST_CASE("gem score") {
  Rng rng(4);
  const size_t dim = 5;
  SUBCASE("identical experts give the common score for any gate") {
    LinearExpert e = RandomExpert(rng, dim, "x");
    ExpertRegistry reg;
    for (Emotion k : kAllEmotions) reg.Add(k, e);
    for (int trial = 0; trial < 200; ++trial) {
      FeatureVector x = RandomX(rng, dim);
      FusionResult r = GemScore(x, reg, RandomGate(rng, dim, 3), Temperature(1.5));
      CHECK(r.fused == Score(e, x.values));
    }
  }
  SUBCASE("zero gate gives the mean") {
    ExpertRegistry reg = RandomRegistry(rng, dim);
    for (int trial = 0; trial < 200; ++trial) {
      FeatureVector x = RandomX(rng, dim);
      FusionResult r = GemScore(x, reg, GateModel::Zero(dim), Temperature(1.5));
      const auto &s = r.scores;
      CHECK(r.fused == (s[0] + s[1] + s[2] + s[3]) / 4);
    }
  }
  SUBCASE("stored gating is gate_probs bit for bit") {
    ExpertRegistry reg = RandomRegistry(rng, dim);
    for (int trial = 0; trial < 200; ++trial) {
      FeatureVector x = RandomX(rng, dim);
      GateModel g = RandomGate(rng, dim);
      Temperature t(0.5 + rng.Uniform() * 3);
      FusionResult r = GemScore(x, reg, g, t);
      CHECK(r.gating == GateProbs(g, x.values, t));
      FusionResult via_source = GemScore("u", x.values, reg, GateSource(g), t);
      CHECK(via_source.fused == r.fused);
      CHECK(via_source.utt_id == "u");
    }
  }
  SUBCASE("dimension mismatch propagates") {
    ExpertRegistry reg = RandomRegistry(rng, dim);
    CHECK_THROWS_AS(GemScore(RandomX(rng, dim + 1), reg, GateModel::Zero(dim),
                             Temperature(1.5)),
                    InputError);
  }
}

TEST_CASE("hard gate") {
  ExpertRegistry reg;
  for (Emotion e : kAllEmotions)
    reg.Add(e, ScoreTable{{"u", 0.1 + 0.2 * Index(e)}}, "t");
  LogitsTable happy{{"u", EmotionLogits{{0, 3, 1, 2}}}};
  CHECK(HardGateScore("u", {}, reg, GateSource(happy)).fused == 0.1 + 0.2 * 1);
  LogitsTable tie{{"u", EmotionLogits{{2, 2, 1, 0}}}};
  FusionResult r = HardGateScore("u", {}, reg, GateSource(tie));
  CHECK(r.fused == 0.1);
  CHECK(r.gating.p == std::array<double, 4>{1, 0, 0, 0});
  CHECK_THROWS_AS(HardGateScore("v", {}, reg, GateSource(happy)), ValidationError);
}

TEST_CASE("hard gate is the small temperature limit") {
  Rng rng(5);
  const size_t dim = 4;
  int checked = 0;
  while (checked < 1000) {
    ExpertRegistry reg = RandomRegistry(rng, dim);
    GateModel g = RandomGate(rng, dim, 2);
    FeatureVector x = RandomX(rng, dim);
    EmotionLogits z = GateLogits(g, x.values);
    std::array<double, 4> sorted = z.z;
    std::sort(sorted.begin(), sorted.end());
    if (sorted[3] - sorted[2] < 1e-2) continue;  // need a unique argmax
    FusionResult hard = HardGateScore(x, reg, g);
    FusionResult soft = GemScore(x, reg, g, Temperature(1e-4));
    CHECK(std::abs(hard.fused - soft.fused) < 1e-6);
    ++checked;
  }
}

TEST_CASE("decide") {
  CHECK(Decide(0.5, 0.5) == Decision::kAuthentic);
  CHECK(Decide(0.9, 0.5) == Decision::kAuthentic);
  CHECK(Decide(0.4999, 0.5) == Decision::kSpoof);
  CHECK_THROWS_AS(Decide(0.5, std::nan("")), InputError);
  CHECK(static_cast<int>(Decision::kSpoof) == 0);
  CHECK(static_cast<int>(Decision::kAuthentic) == 1);
}

TEST_CASE("decisions at the eer threshold reproduce the confusion matrix") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> bona, spoof;
    size_t nb = 2 + rng.UniformInt(60), ns = 2 + rng.UniformInt(60);
    for (size_t i = 0; i < nb; ++i) bona.push_back(std::round(rng.Gaussian(1, 1) * 20) / 20);
    for (size_t i = 0; i < ns; ++i) spoof.push_back(std::round(rng.Gaussian(0, 1) * 20) / 20);
    EerResult eer = ComputeEer(bona, spoof);
    if (!std::isfinite(eer.point.threshold)) continue;
    // Brute-force confusion matrix at that threshold.
    size_t fa = 0, fr = 0, oracle_fa = 0, oracle_fr = 0;
    for (double s : spoof) {
      fa += Decide(s, eer.point.threshold) == Decision::kAuthentic;
      oracle_fa += !(s < eer.point.threshold);
    }
    for (double s : bona) {
      fr += Decide(s, eer.point.threshold) == Decision::kSpoof;
      oracle_fr += s < eer.point.threshold;
    }
    CHECK(fa == oracle_fa);
    CHECK(fr == oracle_fr);
    CHECK(static_cast<double>(fa) / ns == eer.point.far);
    CHECK(static_cast<double>(fr) / nb == eer.point.frr);
  }
}

TEST_CASE("fusion file round trip") {
  std::vector<FusionResult> rows(2);
  rows[0] = {"a", {0.1, 0.2, 0.3, 0.4}, {{0.25, 0.25, 0.25, 0.25}}, 0.25, {}};
  rows[1] = {"b", {1, 2, 3, 4}, {{0.7, 0.1, 0.1, 0.1}}, 1.6, {}};
  std::string text = FormatFusionResults(rows);
  CHECK(text ==
        "utt_id\tS_n\tS_h\tS_a\tS_s\tE_n\tE_h\tE_a\tE_s\ty_s\n"
        "a\t0.1\t0.2\t0.3\t0.4\t0.25\t0.25\t0.25\t0.25\t0.25\n"
        "b\t1\t2\t3\t4\t0.7\t0.1\t0.1\t0.1\t1.6\n");
  testing::TempDir dir;
  WriteFusionResults(rows, dir / "f.tsv");
  auto back = ReadFusionResults(dir / "f.tsv");
  REQUIRE(back.size() == 2);
  CHECK(back[1].utt_id == "b");
  CHECK(back[1].scores == rows[1].scores);
  CHECK(back[1].gating == rows[1].gating);
  CHECK(back[1].fused == 1.6);
}

}  // namespace gem
