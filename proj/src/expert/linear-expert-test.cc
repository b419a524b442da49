// expert/linear-expert-test.cc

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
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/rng.h"
#include "base/text-utils.h"
#include "expert/linear-expert.h"

namespace gem {

namespace {

TrainingExample Example(std::vector<double> x, Label l,
                        Emotion e = Emotion::kNeutral) {
  return {FeatureVector{std::move(x)}, l, e};
}

TrainingSet RandomSet(Rng &rng, size_t n, size_t dim, Emotion e = Emotion::kNeutral) {
  TrainingSet set;
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> x(dim);
    for (double &v : x) v = rng.Gaussian();
    set.push_back(Example(std::move(x), i % 2 ? Label::kSpoof : Label::kBonafide, e));
  }
  return set;
}

// 20 points in the plane: bona fide above the line y = x + 1, spoof below
// y = x - 1, so the margin around y = x is sqrt(2) / 2 * 2 >= 1.
TrainingSet SeparableToy() {
  TrainingSet set;
  Rng rng(77);
  for (int i = 0; i < 20; ++i) {
    double x = 4 * rng.Uniform() - 2;
    double gap = 1.5 + rng.Uniform();
    bool bona = i % 2 == 0;
    set.push_back(Example({x, bona ? x + gap : x - gap},
                          bona ? Label::kBonafide : Label::kSpoof));
  }
  return set;
}

// Exhaustive search over separating directions on a 0.1 degree grid: the
// best achievable margin (half the gap between the classes' projections).
double BestSeparatingMargin(const TrainingSet &set) {
  double best = -1e300;
  for (int step = 0; step < 3600; ++step) {
    double th = step * std::numbers::pi / 1800.0;
    double c = std::cos(th), s = std::sin(th);
    double min_b = 1e300, max_s = -1e300;
    for (const auto &ex : set) {
      double p = c * ex.x.values[0] + s * ex.x.values[1];
      if (ex.label == Label::kBonafide) min_b = std::min(min_b, p);
      else max_s = std::max(max_s, p);
    }
    best = std::max(best, (min_b - max_s) / 2);
  }
  return best;
}

testing::Real OracleLoss(const LinearExpert &e, const TrainingSet &set, double l2) {
  testing::Real loss = 0;
  for (const auto &ex : set) {
    testing::Real z = testing::OracleDot(e.weights, ex.x.values) + e.bias;
    testing::Real p = 1.0L / (1.0L + std::exp(-z));
    loss -= ex.label == Label::kBonafide ? std::log(p) : std::log(1.0L - p);
  }
  loss /= set.size();
  for (double w : e.weights) loss += l2 * static_cast<testing::Real>(w) * w;
  return loss;
}

}  // namespace

TEST_CASE("score examples") {
  LinearExpert zero{{0, 0, 0}, 0.0, "z"};
  CHECK(Score(zero, std::vector<double>{3, -1, 8}) == 0.5);
  LinearExpert unit{{1, 0, 0}, 0.0, "u"};
  CHECK(Score(unit, std::vector<double>{0, 5, -7}) == 0.5);
  CHECK_THROWS_AS(Score(unit, std::vector<double>{1, 2}), InputError);
  CHECK(std::isfinite(Sigmoid(-1e308)));
  CHECK(Sigmoid(800) == 1.0);
  LinearExpert steep{{1}, 0.0, "s"};
  for (double x : {-1e6, -800.0, -40.0, 40.0, 800.0, 1e6}) {
    double s = Score(steep, std::vector<double>{x});
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
}

TEST_CASE("score matches a high precision oracle") {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    size_t dim = 1 + rng.UniformInt(60);
    LinearExpert e;
    for (size_t d = 0; d < dim; ++d) e.weights.push_back(rng.Gaussian(0, 0.5));
    e.bias = rng.Gaussian();
    std::vector<double> x(dim);
    for (double &v : x) v = rng.Gaussian();
    double ref = testing::OracleSigmoid(testing::OracleDot(e.weights, x) + e.bias);
    CHECK(testing::RelDiff(Score(e, x), ref) < 1e-12);
  }
}

TEST_CASE("train config") {
  CHECK(TrainConfig::Generalist().batch_size == 32);
  CHECK(TrainConfig::Generalist().epochs == 50);
  CHECK(TrainConfig::Generalist().learning_rate == 1e-4);
  CHECK(TrainConfig::Specialist().batch_size == 8);
  CHECK(TrainConfig::Specialist().epochs == 100);
  TrainConfig bad;
  bad.learning_rate = 0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = TrainConfig{};
  bad.batch_size = 0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = TrainConfig{};
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  CHECK_NOTHROW(bad.Validate(true));
  auto kv = KeyValueConfig::Parse("train.lr = 0.05\ntrain.epochs = 7\n");
  TrainConfig c = TrainConfig::FromConfig(kv, "train.", TrainConfig::Specialist());
  CHECK(c.learning_rate == 0.05);
  CHECK(c.epochs == 7);
  CHECK(c.batch_size == 8);
}

TEST_CASE("loss value and gradient") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    size_t dim = 1 + rng.UniformInt(8);
    TrainingSet set = RandomSet(rng, 3 + rng.UniformInt(20), dim);
    LinearExpert e;
    for (size_t d = 0; d < dim; ++d) e.weights.push_back(rng.Gaussian());
    e.bias = rng.Gaussian();
    const double l2 = rng.Uniform() * 0.1;
    std::vector<size_t> batch;
    for (size_t i = 0; i < set.size(); ++i)
      if (rng.Uniform() < 0.7 || batch.empty()) batch.push_back(i);
    ExpertGradient g = ExpertLossAndGradient(e, set, batch, l2);

    TrainingSet sub;
    for (size_t i : batch) sub.push_back(set[i]);
    CHECK(testing::RelDiff(g.loss, static_cast<double>(OracleLoss(e, sub, l2))) < 1e-12);

    const double h = 1e-5;
    auto loss_at = [&](const LinearExpert &p) {
      return ExpertLossAndGradient(p, set, batch, l2).loss;
    };
    for (size_t d = 0; d <= dim; ++d) {
      LinearExpert plus = e, minus = e;
      if (d < dim) {
        plus.weights[d] += h;
        minus.weights[d] -= h;
      } else {
        plus.bias += h;
        minus.bias -= h;
      }
      double fd = (loss_at(plus) - loss_at(minus)) / (2 * h);
      double an = d < dim ? g.grad_weights[d] : g.grad_bias;
      CHECK(testing::RelDiff(an, fd, 1e-3) < 1e-5);
    }
  }
}

TEST_CASE("separable toy set") {
  TrainingSet toy = SeparableToy();
  REQUIRE(BestSeparatingMargin(toy) >= 1.0);
  TrainConfig c;
  c.learning_rate = 0.5;
  c.epochs = 200;
  c.seed = 3;
  LinearExpert e = TrainGeneralist(toy, c);
  CHECK(e.tag == "generalist");
  int correct = 0;
  double mean_b = 0, mean_s = 0;
  for (const auto &ex : toy) {
    double s = Score(e, ex.x.values);
    bool bona = ex.label == Label::kBonafide;
    correct += (s >= 0.5) == bona;
    (bona ? mean_b : mean_s) += s / 10;
  }
  CHECK(correct == 20);
  CHECK(mean_b > mean_s);

  LinearExpert again = TrainGeneralist(toy, c);
  CHECK(again == e);
  c.seed = 4;
  CHECK_FALSE(TrainGeneralist(toy, c) == e);
}

TEST_CASE("single class training set") {
  TrainingSet set = {Example({1}, Label::kBonafide), Example({2}, Label::kBonafide)};
  CHECK_THROWS_AS(TrainGeneralist(set, TrainConfig{}), TrainingError);
  CHECK_THROWS_AS(TrainGeneralist({}, TrainConfig{}), TrainingError);
}

TEST_CASE("full batch descent does not increase the loss") {
  Rng rng(5);
  TrainingSet set = RandomSet(rng, 40, 5);
  double prev = 1e300;
  for (int it = 1; it <= 10; ++it) {
    TrainConfig c;
    c.learning_rate = 0.05;
    c.batch_size = set.size();
    c.epochs = it;
    double loss = ExpertLossAndGradient(TrainGeneralist(set, c), set, c.l2).loss;
    CHECK(loss <= prev + 1e-12);
    prev = loss;
  }
}

TEST_CASE("specialize") {
  Rng rng(12);
  TrainingSet happy = RandomSet(rng, 30, 4, Emotion::kHappy);
  LinearExpert base{{0.1, -0.2, 0.3, 0.0}, 0.05, "generalist"};
  TrainConfig none = TrainConfig::Specialist();
  none.epochs = 0;
  LinearExpert same = Specialize(base, happy, none);
  CHECK(same.weights == base.weights);
  CHECK(same.bias == base.bias);
  CHECK(same.tag == "model-h");

  TrainingSet mixed = happy;
  mixed.push_back(Example({0, 0, 0, 0}, Label::kSpoof, Emotion::kSad));
  CHECK_THROWS_AS(Specialize(base, mixed, none), InputError);
  TrainingSet one_class = {Example({1, 1, 1, 1}, Label::kSpoof, Emotion::kSad)};
  CHECK_THROWS_AS(Specialize(base, one_class, none), TrainingError);

  TrainConfig c = TrainConfig::Specialist();
  c.seed = 8;
  c.learning_rate = 0.05;
  CHECK(Specialize(base, happy, c) == Specialize(base, happy, c));
}

// Happy trials separate only along dimension j; the generalist was fitted
// on neutral trials that separate along dimension 0.
TEST_CASE("specialist moves the informative dimension most") {
  Rng rng(31);
  const size_t dim = 6, j = 4;
  TrainingSet neutral, happy;
  for (int i = 0; i < 200; ++i) {
    Label l = i % 2 ? Label::kSpoof : Label::kBonafide;
    double sign = l == Label::kBonafide ? 1 : -1;
    std::vector<double> xn(dim), xh(dim);
    for (size_t d = 0; d < dim; ++d) {
      xn[d] = rng.Gaussian(0, 0.3);
      xh[d] = rng.Gaussian(0, 0.3);
    }
    xn[0] += sign;
    xh[j] += sign;
    neutral.push_back(Example(xn, l, Emotion::kNeutral));
    happy.push_back(Example(xh, l, Emotion::kHappy));
  }
  TrainConfig g;
  g.learning_rate = 0.1;
  g.seed = 1;
  LinearExpert base = TrainGeneralist(neutral, g);
  TrainConfig s = TrainConfig::Specialist();
  s.learning_rate = 0.05;
  s.seed = 2;
  LinearExpert spec = Specialize(base, happy, s);
  size_t arg = 0;
  for (size_t d = 0; d < dim; ++d)
    if (std::abs(spec.weights[d] - base.weights[d]) >
        std::abs(spec.weights[arg] - base.weights[arg]))
      arg = d;
  CHECK(arg == j);
}

TEST_CASE("model file round trips bit exactly") {
  Rng rng(2);
  LinearExpert e{{}, rng.Gaussian() * 1e-7, "model-s"};
  for (int d = 0; d < 30; ++d) e.weights.push_back(rng.Gaussian() * std::pow(10.0, d % 7 - 3));
  e.weights.push_back(0.1);
  e.weights.push_back(-0.0);
  LinearExpert back = ParseExpert(FormatExpert(e), "m");
  CHECK(back == e);
  testing::TempDir dir;
  WriteExpert(e, dir / "m.model");
  CHECK(ReadExpert(dir / "m.model") == e);
  CHECK_THROWS_AS(ParseExpert("t\n3\n1\n2\n", "m"), FormatError);
  CHECK_THROWS_AS(ParseExpert("t\n1\nx\n0\n", "m"), FormatError);
}

TEST_CASE("external score files") {
  testing::TempDir dir;
  WriteFileAtomic(dir / "empty.tsv", "");
  CHECK(LoadScores(dir / "empty.tsv").empty());
  WriteFileAtomic(dir / "three.tsv", "a\t0.25\nb\t-3.5\nc\t12\n");
  ScoreTable t = LoadScores(dir / "three.tsv");
  CHECK(t.size() == 3);
  CHECK(t.at("a") == 0.25);
  CHECK(t.at("b") == -3.5);
  CHECK(t.at("c") == 12.0);
  WriteFileAtomic(dir / "nan.tsv", "u1\tNaN\n");
  try {
    LoadScores(dir / "nan.tsv");
    FAIL("expected a format error");
  } catch (const FormatError &e) {
    CHECK(std::string(e.what()).find(":1:") != std::string::npos);
  }
  WriteFileAtomic(dir / "dup.tsv", "u1\t1\nu1\t2\n");
  CHECK_THROWS_AS(LoadScores(dir / "dup.tsv"), ValidationError);
  WriteScores({{"x", 0.5}, {"y", 0.125}}, dir / "out.tsv");
  CHECK(ReadFileToString(dir / "out.tsv") == "x\t0.5\ny\t0.125\n");
}

}  // namespace gem
