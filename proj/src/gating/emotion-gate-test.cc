// gating/emotion-gate-test.cc

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
#include <limits>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/rng.h"
#include "base/text-utils.h"
#include "gating/emotion-gate.h"

namespace gem {

namespace {

EmotionLogits Z(double a, double b, double c, double d) { return {{a, b, c, d}}; }

double Sum(const EmotionProbabilities &p) {
  return p.p[0] + p.p[1] + p.p[2] + p.p[3];
}

// One Gaussian blob per emotion, centred on +-3 along its own axis.
TrainingSet Blobs(Rng &rng, int per_class, size_t dim) {
  TrainingSet set;
  for (int i = 0; i < per_class; ++i)
    for (Emotion e : kAllEmotions) {
      std::vector<double> x(dim);
      for (double &v : x) v = rng.Gaussian(0, 0.7);
      x[Index(e) % dim] += Index(e) < static_cast<int>(dim) ? 3.0 : -3.0;
      set.push_back({FeatureVector{x}, Label::kBonafide, e});
    }
  return set;
}

double NearestCentroidAccuracy(const TrainingSet &set) {
  const size_t dim = set.front().x.dim();
  std::vector<std::vector<double>> c(kNumEmotions, std::vector<double>(dim, 0.0));
  std::vector<int> n(kNumEmotions, 0);
  for (const auto &ex : set) {
    ++n[Index(ex.emotion)];
    for (size_t d = 0; d < dim; ++d) c[Index(ex.emotion)][d] += ex.x.values[d];
  }
  for (int k = 0; k < kNumEmotions; ++k)
    for (double &v : c[k]) v /= n[k];
  int correct = 0;
  for (const auto &ex : set) {
    int best = 0;
    double best_d = 1e300;
    for (int k = 0; k < kNumEmotions; ++k) {
      double d2 = 0;
      for (size_t d = 0; d < dim; ++d)
        d2 += (ex.x.values[d] - c[k][d]) * (ex.x.values[d] - c[k][d]);
      if (d2 < best_d) best_d = d2, best = k;
    }
    correct += best == Index(ex.emotion);
  }
  return static_cast<double>(correct) / set.size();
}

GateModel RandomGate(Rng &rng, size_t dim) {
  GateModel g = GateModel::Zero(dim);
  for (int k = 0; k < kNumEmotions; ++k) {
    for (double &w : g.weights[k]) w = rng.Gaussian();
    g.bias[k] = rng.Gaussian();
  }
  return g;
}

}  // namespace

TEST_CASE("soften examples") {
  for (double t : {0.01, 1.0, 1.5, 100.0}) {
    EmotionProbabilities p = Soften(Z(0, 0, 0, 0), t);
    for (double v : p.p) CHECK(v == 0.25);
  }
  EmotionProbabilities p = Soften(Z(1, 0, 0, 0), 1.5);
  auto ref = testing::OracleSoftmax({1, 0, 0, 0}, 1.5);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(p.p[i] - ref[i]) < 1e-12);

  EmotionProbabilities big = Soften(Z(1000, 0, 0, 0), 1.0);
  for (double v : big.p) CHECK(std::isfinite(v));
  CHECK(big.p[0] == doctest::Approx(1.0));
  CHECK(big.p[1] < 1e-300);
  CHECK(big.p[1] > 0.0);
}

TEST_CASE("soften errors") {
  CHECK_THROWS_AS(Temperature(0.0), InputError);
  CHECK_THROWS_AS(Temperature(-1.0), InputError);
  CHECK_THROWS_AS(Temperature(std::numeric_limits<double>::infinity()), InputError);
  CHECK_THROWS_AS(Soften(Z(0, 0, 0, 0), 0.0), InputError);
  CHECK_THROWS_AS(Soften(Z(std::nan(""), 0, 0, 0), 1.0), InputError);
  CHECK_THROWS_AS(Soften(Z(0, std::numeric_limits<double>::infinity(), 0, 0), 1.0),
                  InputError);
  CHECK(Temperature::Default().value() == 1.5);
}

TEST_CASE("soften normalisation and positivity") {
  Rng rng(100);
  for (int trial = 0; trial < 20000; ++trial) {
    EmotionLogits z;
    double scale = std::pow(10.0, rng.Uniform() * 4 - 1);
    for (double &v : z.z) v = rng.Gaussian(0, scale);
    double t = std::pow(10.0, rng.Uniform() * 6 - 3);
    EmotionProbabilities p = Soften(z, t);
    CHECK(std::abs(Sum(p) - 1.0) < 1e-9);
    for (double v : p.p) CHECK(v > 0.0);
  }
}

TEST_CASE("soften agrees with the oracle at the default temperature") {
  Rng rng(4);
  for (int trial = 0; trial < 5000; ++trial) {
    std::array<double, 4> z;
    for (double &v : z) v = rng.Gaussian(0, 3);
    EmotionProbabilities p = Soften(EmotionLogits{z}, Temperature::Default());
    auto ref = testing::OracleSoftmax(z, 1.5);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(p.p[i] - ref[i]) < 1e-12);
  }
}

TEST_CASE("temperature limits") {
  Rng rng(6);
  for (int trial = 0; trial < 2000; ++trial) {
    EmotionLogits z;
    for (double &v : z.z) v = 20 * rng.Uniform() - 10;
    EmotionProbabilities hot = Soften(z, 1e4);
    for (double v : hot.p) CHECK(std::abs(v - 0.25) < 1e-3);

    // Force a gap of at least 0.1 between the top logit and the rest.
    int top = static_cast<int>(rng.UniformInt(4));
    double m = *std::max_element(z.z.begin(), z.z.end());
    z.z[top] = m + 0.1 + rng.Uniform();
    EmotionProbabilities cold = Soften(z, 1e-3);
    CHECK(cold.p[top] > 1 - 1e-6);
    CHECK(ArgmaxEmotion(z) == static_cast<Emotion>(top));
  }
}

TEST_CASE("shift invariance") {
  Rng rng(8);
  for (int trial = 0; trial < 5000; ++trial) {
    // Integer logits and shifts are exactly representable, so z + c is
    // computed without rounding and the outputs must agree bit for bit.
    EmotionLogits z;
    for (double &v : z.z) v = static_cast<double>(rng.UniformInt(41)) - 20;
    double c = static_cast<double>(rng.UniformInt(2001)) - 1000;
    EmotionLogits shifted = z;
    for (double &v : shifted.z) v += c;
    double t = std::pow(10.0, rng.Uniform() * 4 - 2);
    CHECK(Soften(shifted, t) == Soften(z, t));

    // Arbitrary reals: z + c rounds, so equality holds to rounding only.
    EmotionLogits r, rs;
    double cr = rng.Gaussian(0, 100);
    for (int i = 0; i < 4; ++i) {
      r.z[i] = rng.Gaussian(0, 3);
      rs.z[i] = r.z[i] + cr;
    }
    EmotionProbabilities a = Soften(r, 1.5), b = Soften(rs, 1.5);
    for (int i = 0; i < 4; ++i) CHECK(std::abs(a.p[i] - b.p[i]) < 1e-12);
  }
}

TEST_CASE("argmax ties go to the lowest index") {
  CHECK(ArgmaxEmotion(Z(1, 1, 1, 1)) == Emotion::kNeutral);
  CHECK(ArgmaxEmotion(Z(0, 2, 2, 1)) == Emotion::kHappy);
  CHECK(ArgmaxEmotion(Z(0, 1, 2, 2)) == Emotion::kAngry);
  CHECK(ArgmaxEmotion(Z(-5, -4, -3, -2)) == Emotion::kSad);
}

TEST_CASE("gate probabilities") {
  Rng rng(13);
  GateModel zero = GateModel::Zero(5);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> x(5);
    for (double &v : x) v = rng.Gaussian(0, 10);
    for (double v : GateProbs(zero, x, Temperature(1.5)).p) CHECK(v == 0.25);
  }
  CHECK_THROWS_AS(GateLogits(zero, std::vector<double>{1, 2}), InputError);

  for (int trial = 0; trial < 1000; ++trial) {
    size_t dim = 1 + rng.UniformInt(10);
    GateModel g = RandomGate(rng, dim);
    std::vector<double> x(dim);
    for (double &v : x) v = rng.Gaussian();
    std::array<double, 4> z;
    for (int k = 0; k < 4; ++k)
      z[k] = static_cast<double>(testing::OracleDot(g.weights[k], x) + g.bias[k]);
    auto ref = testing::OracleSoftmax(z, 1.5);
    EmotionProbabilities p = GateProbs(g, x, Temperature(1.5));
    for (int k = 0; k < 4; ++k) CHECK(std::abs(p.p[k] - ref[k]) < 1e-12);

    EmotionProbabilities sharp = GateProbs(g, x, Temperature(0.1));
    EmotionProbabilities flat = GateProbs(g, x, Temperature(10));
    auto arg = [](const EmotionProbabilities &q) {
      return std::max_element(q.p.begin(), q.p.end()) - q.p.begin();
    };
    CHECK(arg(sharp) == arg(flat));
  }
}

TEST_CASE("gate gradient") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    size_t dim = 1 + rng.UniformInt(6);
    GateModel g = RandomGate(rng, dim);
    TrainingSet set = Blobs(rng, 2 + static_cast<int>(rng.UniformInt(4)), dim);
    std::vector<size_t> batch;
    for (size_t i = 0; i < set.size(); ++i)
      if (rng.Uniform() < 0.6 || batch.empty()) batch.push_back(i);
    const double l2 = 0.05 * rng.Uniform();
    GateGradient an = GateLossAndGradient(g, set, batch, l2);

    // Independent loss: mean cross-entropy in extended precision + l2 |W|^2.
    testing::Real ref = 0;
    for (size_t i : batch) {
      std::array<testing::Real, 4> z;
      testing::Real mx = -1e300L, s = 0;
      for (int k = 0; k < 4; ++k) {
        z[k] = testing::OracleDot(g.weights[k], set[i].x.values) + g.bias[k];
        mx = std::max(mx, z[k]);
      }
      for (int k = 0; k < 4; ++k) s += std::exp(z[k] - mx);
      ref -= z[Index(set[i].emotion)] - mx - std::log(s);
    }
    ref /= batch.size();
    for (const auto &w : g.weights)
      for (double v : w) ref += l2 * static_cast<testing::Real>(v) * v;
    CHECK(testing::RelDiff(an.loss, static_cast<double>(ref)) < 1e-12);

    const double h = 1e-5;
    for (int k = 0; k < 4; ++k)
      for (size_t d = 0; d <= dim; ++d) {
        GateModel plus = g, minus = g;
        if (d < dim) {
          plus.weights[k][d] += h;
          minus.weights[k][d] -= h;
        } else {
          plus.bias[k] += h;
          minus.bias[k] -= h;
        }
        double fd = (GateLossAndGradient(plus, set, batch, l2).loss -
                     GateLossAndGradient(minus, set, batch, l2).loss) / (2 * h);
        double a = d < dim ? an.grad_weights[k][d] : an.grad_bias[k];
        CHECK(testing::RelDiff(a, fd, 1e-3) < 1e-5);
      }
  }
}

TEST_CASE("train gate on separable blobs") {
  Rng rng(23);
  TrainingSet set = Blobs(rng, 100, 6);
  REQUIRE(NearestCentroidAccuracy(set) >= 0.99);
  TrainConfig c = GateTrainDefaults();
  c.seed = 5;
  GateModel g = TrainGate(set, c);
  CHECK(GateAccuracy(g, set) >= 0.95);
  CHECK(TrainGate(set, c) == g);

  TrainingSet neutral;
  for (const auto &ex : set)
    if (ex.emotion == Emotion::kNeutral) neutral.push_back(ex);
  CHECK_THROWS_AS(TrainGate(neutral, c), TrainingError);
}

TEST_CASE("gate file round trip") {
  Rng rng(3);
  GateModel g = RandomGate(rng, 7);
  CHECK(ParseGate(FormatGate(g), "g") == g);
  testing::TempDir dir;
  WriteGate(g, dir / "gate.model");
  CHECK(ReadGate(dir / "gate.model") == g);
  CHECK_THROWS_AS(ParseGate("gate\n2\n1 2 3\n", "g"), FormatError);
}

TEST_CASE("logits files") {
  testing::TempDir dir;
  WriteFileAtomic(dir / "empty.tsv", "");
  CHECK(LoadLogits(dir / "empty.tsv").empty());
  WriteFileAtomic(dir / "two.tsv", "a\t1\t-2\t0.5\t3\nb\t0\t0\t0\t1e3\n");
  LogitsTable t = LoadLogits(dir / "two.tsv");
  CHECK(t.size() == 2);
  CHECK(t.at("a") == Z(1, -2, 0.5, 3));
  CHECK(t.at("b") == Z(0, 0, 0, 1000));
  WriteFileAtomic(dir / "three.tsv", "a\t1\t2\n");
  CHECK_THROWS_AS(LoadLogits(dir / "three.tsv"), FormatError);
  WriteFileAtomic(dir / "bad.tsv", "a\t1\t2\tx\t3\n");
  CHECK_THROWS_AS(LoadLogits(dir / "bad.tsv"), FormatError);
  WriteFileAtomic(dir / "dup.tsv", "a\t1\t2\t3\t4\na\t1\t2\t3\t4\n");
  CHECK_THROWS(LoadLogits(dir / "dup.tsv"));
  WriteLogits({{"x", Z(0.25, 1, 2, -3)}}, dir / "out.tsv");
  CHECK(LoadLogits(dir / "out.tsv").at("x") == Z(0.25, 1, 2, -3));
}

}  // namespace gem
