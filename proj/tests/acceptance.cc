// tests/acceptance.cc

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

// Runs the ten acceptance criteria and prints one PASS/FAIL line each.
// Exit status is non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.h"
#include "fixtures.h"
#include "pipeline.h"
#include "sim-helpers.h"
#include "test-util.h"

#include "base/rng.h"
#include "base/text-utils.h"
#include "ensemble/gated-ensemble.h"
#include "expert/linear-expert.h"
#include "gating/emotion-gate.h"
#include "manifest/manifest.h"
#include "metrics/eer.h"
#include "metrics/eval-report.h"
#include "simulator/simulator.h"

namespace gem {
namespace {

using Clock = std::chrono::steady_clock;

// Accumulates the first few violations of one criterion.
class Verdict {
 public:
  void Require(bool ok, const std::string &what) {
    ++checks_;
    if (ok) return;
    if (failures_.size() < 5) failures_.push_back(what);
    ++failed_;
  }
  void Note(const std::string &s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  bool ok() const { return failed_ == 0; }
  std::string Summary() const {
    std::string s = std::to_string(checks_) + " checks";
    if (!notes_.empty()) s += "; " + notes_;
    if (failed_ > 0) {
      s += "; " + std::to_string(failed_) + " failed, first:";
      for (const auto &f : failures_) s += " [" + f + "]";
    }
    return s;
  }

 private:
  long checks_ = 0, failed_ = 0;
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string Num(double v) { return FormatReal(v, 6); }

double Seconds(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> Draw(Rng &rng, size_t n, double mean, double sd) {
  std::vector<double> v(n);
  for (double &x : v) x = rng.Gaussian(mean, sd);
  return v;
}

// 1. Random score sets, sizes 2-200 per class, against brute force.
void EerOracleEquivalence(Verdict &v) {
  Rng rng(20261);
  const auto start = Clock::now();
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t nb = 2 + rng.UniformInt(199), ns = 2 + rng.UniformInt(199);
    std::vector<double> bona = Draw(rng, nb, rng.Gaussian(1.0, 1.0), 0.2 + rng.Uniform());
    std::vector<double> spoof = Draw(rng, ns, 0.0, 0.2 + rng.Uniform());
    // Some sets on a coarse grid so ties are exercised too.
    if (trial % 3 == 0) {
      for (double &x : bona) x = std::round(x * 4) / 4;
      for (double &x : spoof) x = std::round(x * 4) / 4;
    }
    const double got = ComputeEer(bona, spoof).eer;
    const double want = testing::OracleEer(bona, spoof);
    worst = std::max(worst, std::abs(got - want));
    v.Require(std::abs(got - want) <= 1e-12,
              "set " + std::to_string(trial) + ": " + Num(got) + " vs " + Num(want));
  }
  const double secs = Seconds(start);
  v.Require(secs < 10.0, "runtime " + Num(secs) + " s");
  v.Note("max |diff| " + Num(worst) + ", " + Num(secs) + " s");
}

// 2. Invariances and boundary cases.
void EerInvariances(Verdict &v) {
  Rng rng(20262);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t nb = 2 + rng.UniformInt(199), ns = 2 + rng.UniformInt(199);
    std::vector<double> bona = Draw(rng, nb, 1.0, 1.0), spoof = Draw(rng, ns, 0.0, 1.0);
    const double base = ComputeEer(bona, spoof).eer;
    const std::string tag = "set " + std::to_string(trial);

    // Strictly increasing maps keep the ordering of every score.
    const std::vector<std::function<double(double)>> maps = {
        [](double x) { return std::exp(x); },
        [](double x) { return 3.0 * x + 7.0; },
        [](double x) { return std::atan(x); },
        [](double x) { return x < 0 ? x : 10.0 * x; }};
    for (const auto &f : maps) {
      std::vector<double> b2(bona), s2(spoof);
      for (double &x : b2) x = f(x);
      for (double &x : s2) x = f(x);
      v.Require(std::abs(ComputeEer(b2, s2).eer - base) <= 1e-9, tag + " monotone map");
    }

    // Swapping the classes and negating the scores describes the same
    // detector with the opposite polarity.
    std::vector<double> nb2, ns2;
    for (double x : spoof) nb2.push_back(-x);
    for (double x : bona) ns2.push_back(-x);
    v.Require(std::abs(ComputeEer(nb2, ns2).eer - base) <= 1e-9, tag + " polarity");

    // Separable: every bona fide score above every spoof score.
    std::vector<double> hi(bona), lo(spoof);
    for (double &x : hi) x = std::abs(x) + 100.0;
    for (double &x : lo) x = -std::abs(x) - 100.0;
    v.Require(ComputeEer(hi, lo).eer == 0.0, tag + " separable");

    // Identical distributions: the same multiset on both sides.
    v.Require(std::abs(ComputeEer(bona, bona).eer - 50.0) <= 1e-9, tag + " identical");
  }
}

// 3. Equal-variance Gaussians two standard deviations apart.
void AnalyticGaussian(Verdict &v) {
  const double truth = 100.0 * NormalCdf(-1.0);
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SimConfig c;
    c.seed = seed;
    c.trials_per_cell = 2500;  // x 4 emotions = 10000 trials per class
    c.SetScoreParams({0.7, 0.1}, {0.5, 0.1}, {0.7, 0.1}, {0.5, 0.1});
    SyntheticBatch batch = GenerateScores(c);
    const double eer = Eer(batch.expert_scores[0]);
    worst = std::max(worst, std::abs(eer - truth));
    v.Require(std::abs(eer - truth) <= 1.0,
              "seed " + std::to_string(seed) + ": " + Num(eer));
  }
  v.Note("Phi(-1) = " + Num(truth) + "%, max deviation " + Num(worst));
}

// 4. Gating contract.
void GatingContract(Verdict &v) {
  Rng rng(20264);
  for (int trial = 0; trial < 10000; ++trial) {
    EmotionLogits z;
    for (double &x : z.z) x = rng.Gaussian(0.0, 5.0);
    const double t = std::pow(10.0, 6.0 * rng.Uniform() - 3.0);
    EmotionProbabilities p = Soften(z, t);
    double sum = 0.0;
    bool positive = true;
    for (double x : p.p) sum += x, positive &= x > 0.0;
    v.Require(std::abs(sum - 1.0) <= 1e-9 && positive, "normalisation");

    // Exact shift invariance on representable shifts.
    EmotionLogits zi, zs;
    const double c = static_cast<double>(rng.UniformInt(2001)) - 1000.0;
    for (int i = 0; i < 4; ++i) {
      zi.z[i] = static_cast<double>(rng.UniformInt(61)) - 30.0;
      zs.z[i] = zi.z[i] + c;
    }
    v.Require(Soften(zi, t) == Soften(zs, t), "shift invariance");

    EmotionLogits w;
    for (double &x : w.z) x = 20.0 * rng.Uniform() - 10.0;
    for (double x : Soften(w, 1e4).p) v.Require(std::abs(x - 0.25) <= 1e-3, "T = 1e4");
    const int top = static_cast<int>(rng.UniformInt(4));
    w.z[top] = *std::max_element(w.z.begin(), w.z.end()) + 0.1 + rng.Uniform();
    v.Require(Soften(w, 1e-3).p[top] > 1.0 - 1e-6, "T = 1e-3");

    const auto ref = testing::OracleSoftmax(z.z, 1.5);
    const EmotionProbabilities d = Soften(z, Temperature::Default());
    for (int i = 0; i < 4; ++i)
      v.Require(std::abs(d.p[i] - ref[i]) <= 1e-12, "oracle at T = 1.5");
  }
  v.Require(Temperature::Default().value() == 1.5, "default temperature");
}

// 5. Fusion contract.
void FusionContract(Verdict &v) {
  Rng rng(20265);
  for (int trial = 0; trial < 10000; ++trial) {
    ExpertScores s;
    for (double &x : s) x = rng.Uniform();
    EmotionLogits z;
    for (double &x : z.z) x = rng.Gaussian(0.0, 4.0);
    const double y = Fuse(s, Soften(z, std::pow(10.0, 4.0 * rng.Uniform() - 2.0)));
    v.Require(*std::min_element(s.begin(), s.end()) <= y &&
                  y <= *std::max_element(s.begin(), s.end()),
              "convexity");

    const int pick = static_cast<int>(rng.UniformInt(4));
    EmotionLogits one_hot;
    one_hot.z[pick] = 1000.0;
    v.Require(std::abs(Fuse(s, Soften(one_hot, 1.0)) - s[pick]) <= 1e-6, "one-hot");

    const double mean = (s[0] + s[1] + s[2] + s[3]) / 4.0;
    v.Require(Fuse(s, Soften(EmotionLogits{}, 1.0)) == mean, "uniform mean");
  }

  // Hard gate against the T = 1e-4 soft gate.
  int checked = 0;
  while (checked < 1000) {
    ExpertRegistry reg;
    LogitsTable logits;
    for (Emotion e : kAllEmotions) reg.Add(e, ScoreTable{{"u", rng.Uniform()}}, "r");
    EmotionLogits z;
    for (double &x : z.z) x = rng.Gaussian(0.0, 3.0);
    std::array<double, 4> sorted = z.z;
    std::sort(sorted.begin(), sorted.end());
    if (sorted[3] - sorted[2] < 0.1) continue;  // a clear winner, as above
    logits.emplace("u", z);
    GateSource gate(logits);
    const double hard = HardGateScore("u", {}, reg, gate).fused;
    const double soft = GemScore("u", {}, reg, gate, Temperature(1e-4)).fused;
    v.Require(std::abs(hard - soft) <= 1e-6, "hard vs soft");
    ++checked;
  }
}

TrainingSet RandomSet(Rng &rng, size_t n, size_t dim) {
  TrainingSet set(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t d = 0; d < dim; ++d) set[i].x.values.push_back(rng.Gaussian());
    set[i].label = rng.UniformInt(2) ? Label::kBonafide : Label::kSpoof;
    set[i].emotion = static_cast<Emotion>(rng.UniformInt(4));
  }
  return set;
}

// 6. Central finite differences, h = 1e-5.
void GradientChecks(Verdict &v) {
  Rng rng(20266);
  const double h = 1e-5;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t dim = 1 + rng.UniformInt(8);
    TrainingSet set = RandomSet(rng, 4 + rng.UniformInt(30), dim);
    std::vector<size_t> batch;
    for (size_t i = 0; i < set.size(); ++i)
      if (rng.Uniform() < 0.7 || batch.empty()) batch.push_back(i);
    const double l2 = 0.1 * rng.Uniform();

    LinearExpert e;
    for (size_t d = 0; d < dim; ++d) e.weights.push_back(rng.Gaussian());
    e.bias = rng.Gaussian();
    ExpertGradient g = ExpertLossAndGradient(e, set, batch, l2);
    for (size_t d = 0; d <= dim; ++d) {
      LinearExpert plus = e, minus = e;
      (d < dim ? plus.weights[d] : plus.bias) += h;
      (d < dim ? minus.weights[d] : minus.bias) -= h;
      const double fd = (ExpertLossAndGradient(plus, set, batch, l2).loss -
                         ExpertLossAndGradient(minus, set, batch, l2).loss) / (2 * h);
      const double an = d < dim ? g.grad_weights[d] : g.grad_bias;
      v.Require(testing::RelDiff(an, fd, 1e-3) <= 1e-5,
                "expert config " + std::to_string(trial));
    }

    GateModel gate = GateModel::Zero(dim);
    for (auto &w : gate.weights)
      for (double &x : w) x = rng.Gaussian();
    for (double &b : gate.bias) b = rng.Gaussian();
    GateGradient gg = GateLossAndGradient(gate, set, batch, l2);
    for (int k = 0; k < 4; ++k)
      for (size_t d = 0; d <= dim; ++d) {
        GateModel plus = gate, minus = gate;
        (d < dim ? plus.weights[k][d] : plus.bias[k]) += h;
        (d < dim ? minus.weights[k][d] : minus.bias[k]) -= h;
        const double fd = (GateLossAndGradient(plus, set, batch, l2).loss -
                           GateLossAndGradient(minus, set, batch, l2).loss) / (2 * h);
        const double an = d < dim ? gg.grad_weights[k][d] : gg.grad_bias[k];
        v.Require(testing::RelDiff(an, fd, 1e-3) <= 1e-5,
                  "gate config " + std::to_string(trial));
      }
  }
}

// 7. Split protocol on the full layout.
void SplitProtocol(Verdict &v) {
  Splits s = BuildSplits(testing::FullLayoutManifest(), testing::PaperSplitSpec());
  auto count = [](const Manifest &m, Label l) {
    return std::count_if(m.begin(), m.end(),
                         [&](const TrialRecord &r) { return r.label == l; });
  };
  const Manifest *parts[] = {&s.train, &s.valid, &s.test};
  const long expect[] = {4800, 2400, 4800};
  const char *names[] = {"train", "valid", "test"};
  for (int i = 0; i < 3; ++i) {
    const long nb = count(*parts[i], Label::kBonafide), ns = count(*parts[i], Label::kSpoof);
    v.Require(nb == expect[i] && ns == expect[i],
              std::string(names[i]) + " " + std::to_string(nb) + "+" + std::to_string(ns));
    v.Note(std::string(names[i]) + " " + std::to_string(nb) + "+" + std::to_string(ns));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      std::set<std::string> spk_i, sys_i;
      for (const auto &r : *parts[i]) {
        spk_i.insert(r.speaker_id);
        if (r.label == Label::kSpoof) sys_i.insert(r.source_system);
      }
      for (const auto &r : *parts[j]) {
        v.Require(!spk_i.count(r.speaker_id), "speaker overlap " + r.speaker_id);
        if (r.label == Label::kSpoof)
          v.Require(!sys_i.count(r.source_system), "system overlap " + r.source_system);
      }
    }
}

// 8. Dominance of the gated ensemble on constructed batches.
void GemDominance(Verdict &v) {
  double worst_margin = -1e300;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    SimConfig c;
    c.seed = seed;
    c.trials_per_cell = 500;
    c.gate_logit_gap = 20.0;
    SyntheticBatch batch = GenerateScores(c);
    const std::string tag = "seed " + std::to_string(seed);
    v.Require(testing::SpecialistAdvantage(batch), tag + " specialist advantage");
    const double gem = Eer(testing::FuseBatch(batch, 1.5));
    const double best = testing::MinSingleExpertEer(batch);
    worst_margin = std::max(worst_margin, gem - best);
    v.Require(gem <= best + 0.5, tag + ": GEM " + Num(gem) + " vs best " + Num(best));
  }
  v.Note("max GEM - best single expert " + Num(worst_margin) + " points");
}

// 9. The full command-line pipeline on a synthetic corpus.
void EndToEnd(Verdict &v) {
  testing::TempDir dir("gem-acceptance");
  const auto start = Clock::now();
  testing::PipelineOutcome first = testing::RunCorpusPipeline(dir.path(), "7");
  const double secs = Seconds(start);
  v.Require(first.ok, "pipeline: " + first.failure);
  if (!first.ok) return;
  v.Require(secs < 60.0, "runtime " + Num(secs) + " s");
  v.Require(first.gem_overall <= first.generalist_overall + 1.0,
            "GEM " + Num(first.gem_overall) + " vs generalist " +
                Num(first.generalist_overall));
  const auto before = testing::SnapshotTree(dir.path());
  testing::PipelineOutcome second = testing::RunCorpusPipeline(dir.path(), "7");
  v.Require(second.ok, "rerun: " + second.failure);
  const auto after = testing::SnapshotTree(dir.path());
  v.Require(after == before, "rerun changed output files");
  v.Note(Num(secs) + " s; overall EER generalist " + Num(first.generalist_overall) +
         "%, GEM " + Num(first.gem_overall) + "%; " + std::to_string(before.size()) +
         " files identical on rerun");
}

std::vector<double> Scores(const std::vector<ScoredTrial> &t, Label l,
                           const std::set<Emotion> &emotions) {
  std::vector<double> out;
  for (const auto &x : t)
    if (x.label == l && emotions.count(x.emotion)) out.push_back(x.score);
  return out;
}

// 10. Report columns and a cell-by-cell recomputation.
void ReportFidelity(Verdict &v) {
  const char *want[] = {"HAS", "Neutral", "Happy", "Angry", "Sad", "Overall"};
  v.Require(kReportColumns.size() == 6, "six columns");
  for (size_t c = 0; c < 6; ++c) v.Require(kReportColumns[c] == want[c], want[c]);

  SimConfig c;
  c.seed = 20;
  c.trials_per_cell = 150;
  SyntheticBatch batch = GenerateScores(c);
  std::vector<ScoredTrial> fused = testing::FuseBatch(batch, 1.5);
  const std::vector<std::set<Emotion>> cols = {
      {Emotion::kHappy, Emotion::kAngry, Emotion::kSad},
      {Emotion::kNeutral}, {Emotion::kHappy}, {Emotion::kAngry}, {Emotion::kSad},
      {Emotion::kNeutral, Emotion::kHappy, Emotion::kAngry, Emotion::kSad}};
  std::vector<std::vector<ScoredTrial>> models = {fused};
  for (const auto &e : batch.expert_scores) models.push_back(e);
  for (const auto &trials : models) {
    EvalReport r = Breakdown(trials);
    for (size_t col = 0; col < cols.size(); ++col) {
      const EerCell &cell = CellAt(r.all, col);
      std::vector<double> b = Scores(trials, Label::kBonafide, cols[col]);
      std::vector<double> s = Scores(trials, Label::kSpoof, cols[col]);
      v.Require(cell.n_bonafide == b.size() && cell.n_spoof == s.size(),
                std::string(want[col]) + " counts");
      v.Require(cell.eer && std::abs(*cell.eer - testing::OracleEer(b, s)) <= 1e-12,
                std::string(want[col]) + " value");
    }
  }
  // Header line of the rendered table.
  const std::string table = RenderReport(Breakdown(fused), ReportFormat::kTable);
  const std::string header = table.substr(0, table.find('\n'));
  size_t pos = 0;
  for (const char *w : want) {
    size_t at = header.find(w, pos);
    v.Require(at != std::string::npos, std::string("table header ") + w);
    pos = at == std::string::npos ? pos : at;
  }
}

struct Criterion {
  const char *id;
  const char *name;
  void (*run)(Verdict &);
};

}  // namespace
}  // namespace gem

int main() {
  using namespace gem;
  const Criterion criteria[] = {
      {"AC1", "EER oracle equivalence", EerOracleEquivalence},
      {"AC2", "EER invariances", EerInvariances},
      {"AC3", "analytic Gaussian EER", AnalyticGaussian},
      {"AC4", "gating contract", GatingContract},
      {"AC5", "fusion contract", FusionContract},
      {"AC6", "gradient checks", GradientChecks},
      {"AC7", "split protocol", SplitProtocol},
      {"AC8", "gated ensemble dominance", GemDominance},
      {"AC9", "end-to-end pipeline", EndToEnd},
      {"AC10", "report fidelity", ReportFidelity},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    Verdict v;
    try {
      c.run(v);
    } catch (const std::exception &e) {
      v.Require(false, std::string("exception: ") + e.what());
    }
    std::printf("%-5s %-28s %s  (%s)\n", c.id, c.name, v.ok() ? "PASS" : "FAIL",
                v.Summary().c_str());
    std::fflush(stdout);
    failed += !v.ok();
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
