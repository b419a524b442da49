// simulator/simulator-test.cc

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
#include <filesystem>

#include "doctest.h"
#include "sim-helpers.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/text-utils.h"
#include "features/feature-extractor.h"
#include "gating/emotion-gate.h"
#include "metrics/eval-report.h"
#include "simulator/simulator.h"

namespace gem {

namespace fs = std::filesystem;
using testing::FuseBatch;
using testing::OfEmotion;

constexpr Label kLabels[] = {Label::kBonafide, Label::kSpoof};

TEST_CASE("normal cdf") {
  CHECK(NormalCdf(0.0) == 0.5);
  CHECK(std::abs(NormalCdf(-1.0) - 0.15865525393145705) < 1e-15);
  CHECK(std::abs(NormalCdf(1.96) - 0.9750021048517795) < 1e-15);
  CHECK(std::abs(AnalyticGaussianEer({1.0, 0.5}, {0.0, 0.5}) - 15.865525393145705) <
        1e-12);
}

TEST_CASE("config validation") {
  SimConfig c;
  CHECK_NOTHROW(c.Validate());
  SimConfig bad = c;
  bad.Params(Emotion::kHappy, Emotion::kSad, Label::kSpoof).stddev = 0.0;
  CHECK_THROWS_AS(GenerateScores(bad), ConfigError);
  bad = c;
  bad.trials_per_cell = 0;
  CHECK_THROWS_AS(GenerateScores(bad), ConfigError);
  bad = c;
  bad.gate_logit_gap = -1.0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = c;
  bad.emotion_bands[1] = {300.0, 600.0};  // overlaps neutral
  CHECK_THROWS_AS(bad.Validate(), ConfigError);
  bad = c;
  bad.utterances_per_cell = 0;
  CHECK_THROWS_AS(bad.Validate(), ConfigError);

  KeyValueConfig kv;
  kv.Set("sim.trials_per_cell", "7");
  kv.Set("sim.gate_logit_gap", "3.5");
  kv.Set("sim.model-h.sad.spoof.mean", "0.2");
  SimConfig read = SimConfig::FromConfig(kv, "sim.");
  CHECK(read.trials_per_cell == 7);
  CHECK(read.gate_logit_gap == 3.5);
  CHECK(read.Params(Emotion::kHappy, Emotion::kSad, Label::kSpoof).mean == 0.2);
  CHECK_NOTHROW(kv.CheckKnownKeys(SimConfig::KnownKeys("sim.")));
  kv.Set("sim.trials_per_cel", "7");
  CHECK_THROWS_AS(kv.CheckKnownKeys(SimConfig::KnownKeys("sim.")), ConfigError);
  KeyValueConfig neg;
  neg.Set("sim.specialist.bonafide.std", "-1");
  CHECK_THROWS_AS(SimConfig::FromConfig(neg, "sim."), ConfigError);
}

TEST_CASE("batch structure and reproducibility") {
  SimConfig c;
  c.seed = 5;
  c.trials_per_cell = 13;
  c.gate_logit_noise = 0.5;
  SyntheticBatch a = GenerateScores(c), b = GenerateScores(c);
  CHECK(a.trials.size() == 8 * 13);
  for (Emotion e : kAllEmotions) {
    REQUIRE(a.expert_scores[Index(e)].size() == a.trials.size());
    CHECK(a.expert_scores[Index(e)] == b.expert_scores[Index(e)]);
    CHECK(a.ExpertTable(e).size() == a.trials.size());
    for (size_t n = 0; n < a.trials.size(); ++n)
      CHECK(a.expert_scores[Index(e)][n].utt_id == a.trials.records()[n].utt_id);
  }
  CHECK(a.logits == b.logits);
  CHECK(a.Logits().size() == a.trials.size());
  CHECK(a.trials.records() == b.trials.records());

  c.seed = 6;
  SyntheticBatch d = GenerateScores(c);
  CHECK(d.expert_scores[0] != a.expert_scores[0]);
}

TEST_CASE("logits favour the true emotion by the gap") {
  SimConfig c;
  c.trials_per_cell = 5;
  c.gate_logit_gap = 20.0;
  SyntheticBatch b = GenerateScores(c);
  for (size_t n = 0; n < b.trials.size(); ++n) {
    const Emotion truth = b.trials.records()[n].emotion;
    for (Emotion e : kAllEmotions)
      CHECK(b.logits[n][e] == (e == truth ? 20.0 : 0.0));
  }
}

TEST_CASE("resizing one cell leaves the others untouched") {
  SimConfig c;
  c.seed = 9;
  c.trials_per_cell = 10;
  SyntheticBatch small = GenerateScores(c);
  c.trials_per_cell = 25;
  SyntheticBatch large = GenerateScores(c);
  // Every trial of the small batch appears with the same score and logits.
  for (Emotion ex : kAllEmotions) {
    ScoreTable big = large.ExpertTable(ex);
    for (const ScoredTrial &t : small.expert_scores[Index(ex)])
      CHECK(big.at(t.utt_id) == t.score);
  }
  LogitsTable big_logits = large.Logits();
  for (const auto &[id, z] : small.Logits()) CHECK(big_logits.at(id) == z);

  // Changing one cell's parameters only moves that cell.
  c.trials_per_cell = 10;
  c.Params(Emotion::kAngry, Emotion::kSad, Label::kSpoof) = {0.1, 0.3};
  SyntheticBatch moved = GenerateScores(c);
  for (Emotion ex : kAllEmotions)
    for (size_t n = 0; n < small.trials.size(); ++n) {
      const TrialRecord &r = small.trials.records()[n];
      bool in_cell = ex == Emotion::kAngry && r.emotion == Emotion::kSad &&
                     r.label == Label::kSpoof;
      CHECK((moved.expert_scores[Index(ex)][n].score ==
             small.expert_scores[Index(ex)][n].score) != in_cell);
    }
}

TEST_CASE("sample moments follow the configured parameters") {
  SimConfig c;
  c.seed = 2;
  c.trials_per_cell = 20000;
  c.SetScoreParams({0.8, 0.05}, {0.2, 0.07}, {0.55, 0.2}, {0.45, 0.3});
  SyntheticBatch b = GenerateScores(c);
  for (Emotion ex : kAllEmotions)
    for (Emotion e : kAllEmotions)
      for (Label l : kLabels) {
        double sum = 0.0, sq = 0.0, n = 0.0;
        for (const auto &t : b.expert_scores[Index(ex)])
          if (t.emotion == e && t.label == l) {
            sum += t.score;
            sq += t.score * t.score;
            n += 1.0;
          }
        const GaussianParams g = c.Params(ex, e, l);
        const double mean = sum / n, var = sq / n - mean * mean;
        // Five standard errors.
        CHECK(std::abs(mean - g.mean) < 5.0 * g.stddev / std::sqrt(n));
        CHECK(std::abs(std::sqrt(var) - g.stddev) < 5.0 * g.stddev / std::sqrt(2.0 * n));
      }
}

TEST_CASE("tiny spread separates the specialist") {
  SimConfig c;
  c.trials_per_cell = 500;
  c.SetScoreParams({0.9, 1e-6}, {0.1, 1e-6}, {0.6, 0.15}, {0.4, 0.15});
  SyntheticBatch b = GenerateScores(c);
  for (Emotion e : kAllEmotions)
    CHECK(Eer(OfEmotion(b.expert_scores[Index(e)], e)) == 0.0);
}

TEST_CASE("empirical EER of a 2 sigma gap") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SimConfig c;
    c.seed = seed;
    c.trials_per_cell = 2500;  // 10000 per class over the four emotions
    c.SetScoreParams({2.0, 1.0}, {0.0, 1.0}, {2.0, 1.0}, {0.0, 1.0});
    SyntheticBatch b = GenerateScores(c);
    const double expected = 100.0 * NormalCdf(-1.0);
    CHECK(std::abs(Eer(b.expert_scores[0]) - expected) < 1.0);
  }
}

TEST_CASE("breakdown cells track the analytic EER") {
  SimConfig c;
  c.seed = 4;
  c.trials_per_cell = 10000;
  SyntheticBatch b = GenerateScores(c);
  for (Emotion ex : kAllEmotions) {
    EvalReport r = Breakdown(b.expert_scores[Index(ex)]);
    for (Emotion e : kAllEmotions) {
      const double truth = AnalyticGaussianEer(c.Params(ex, e, Label::kBonafide),
                                               c.Params(ex, e, Label::kSpoof));
      REQUIRE(r.all.per_emotion[Index(e)].eer.has_value());
      CHECK(std::abs(*r.all.per_emotion[Index(e)].eer - truth) < 1.5);
    }
  }
}

TEST_CASE("clamping into the unit interval keeps the EER") {
  SimConfig c;
  c.trials_per_cell = 300;
  c.SetScoreParams({0.75, 0.3}, {0.25, 0.3}, {0.6, 0.4}, {0.4, 0.4});
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    c.seed = seed;
    SyntheticBatch b = GenerateScores(c);
    for (Emotion ex : kAllEmotions) {
      std::vector<ScoredTrial> clamped = b.expert_scores[Index(ex)];
      bool moved = false;
      for (auto &t : clamped) {
        double v = ClampToUnitInterval(t.score);
        moved |= v != t.score;
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        t.score = v;
      }
      CHECK(moved);
      // Clamping ties the tails together; the tails here sit far beyond the
      // crossing point, so the EER does not move.
      CHECK(Eer(clamped) == Eer(b.expert_scores[Index(ex)]));
    }
  }
}

TEST_CASE("fused sad scores follow the sad specialist") {
  SimConfig c;
  c.seed = 3;
  c.trials_per_cell = 400;
  c.gate_logit_gap = 20.0;
  SyntheticBatch b = GenerateScores(c);
  std::vector<ScoredTrial> fused = FuseBatch(b, 1.5);
  const auto &sad = b.expert_scores[Index(Emotion::kSad)];
  int checked = 0;
  for (size_t n = 0; n < fused.size(); ++n) {
    if (fused[n].emotion != Emotion::kSad) continue;
    CHECK(std::abs(fused[n].score - sad[n].score) < 1e-3);
    ++checked;
  }
  CHECK(checked == 800);
}

TEST_CASE("the gated ensemble matches the best expert") {
  int verified = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SimConfig c;
    c.seed = seed;
    c.trials_per_cell = 300;
    c.gate_logit_gap = 20.0 + seed;
    SyntheticBatch b = GenerateScores(c);
    if (!testing::SpecialistAdvantage(b)) continue;
    ++verified;
    CHECK(Eer(FuseBatch(b, 1.5)) <= testing::MinSingleExpertEer(b) + 0.5);
  }
  CHECK(verified == 20);
}

namespace {

// Feature rows of a generated corpus, keyed by manifest order.
TrainingSet LoadCorpusFeatures(const Manifest &m, const fs::path &dir,
                               const FeatureConfig &fc) {
  TrainingSet set;
  for (const TrialRecord &r : m) {
    TrainingExample ex;
    ex.x = Extract(ReadWav(dir / r.audio_path), fc);
    ex.label = r.label;
    ex.emotion = r.emotion;
    set.push_back(std::move(ex));
  }
  return set;
}

// Emotion whose frequency band holds the loudest mel band.
Emotion BandArgmax(const FeatureVector &x, const MelFilterbank &bank,
                   const SimConfig &c) {
  int best_band = 0;
  for (int k = 1; k < bank.NumBands(); ++k)
    if (x.values[k] > x.values[best_band]) best_band = k;
  const double hz = bank.CenterHz(best_band);
  Emotion best = Emotion::kNeutral;
  double best_dist = 1e300;
  for (Emotion e : kAllEmotions) {
    auto [lo, hi] = c.emotion_bands[Index(e)];
    double d = hz < lo ? lo - hz : hz > hi ? hz - hi : 0.0;
    if (d < best_dist) {
      best_dist = d;
      best = e;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("synthetic corpus") {
  testing::TempDir dir;
  SimConfig c;
  c.seed = 21;
  c.utterances_per_cell = 12;
  c.noise_level = 0.0;
  Manifest m = GenerateCorpus(c, dir.path(), 2);
  CHECK(m.size() == 8 * 12);
  size_t wavs = 0;
  for (const auto &entry : fs::directory_iterator(dir / "wav"))
    wavs += entry.path().extension() == ".wav";
  CHECK(wavs == 8 * 12);

  const long warnings = WarningCount();
  Manifest loaded = LoadManifest(dir / "manifest.csv");
  CHECK(loaded.records() == m.records());
  CHECK(WarningCount() == warnings);

  // Deterministic audio, and the spoof artifact is the only difference
  // between bona fide and spoof renderings of the same index.
  const TrialRecord &angry_spoof_3 = m.records()[2 * 2 * 12 + 12 + 3];
  CHECK(angry_spoof_3.emotion == Emotion::kAngry);
  CHECK(angry_spoof_3.label == Label::kSpoof);
  CHECK(EncodeWav(SynthesizeUtterance(c, Emotion::kAngry, Label::kSpoof, 3)) ==
        ReadFileToString(dir / angry_spoof_3.audio_path));
  CHECK(ReadWav(dir / m.records()[0].audio_path).DurationSeconds() == 1.0);

  FeatureConfig fc;
  TrainingSet data = LoadCorpusFeatures(m, dir.path(), fc);
  MelFilterbank bank(fc, c.sample_rate);
  size_t oracle_hits = 0;
  for (const auto &ex : data) oracle_hits += BandArgmax(ex.x, bank, c) == ex.emotion;
  CHECK(static_cast<double>(oracle_hits) / data.size() >= 0.99);

  std::vector<const FeatureVector *> rows;
  for (const auto &ex : data) rows.push_back(&ex.x);
  FeatureNormalizer norm = FeatureNormalizer::Fit(rows);
  for (auto &ex : data) ex.x = norm.Apply(ex.x);
  TrainConfig tc = GateTrainDefaults();
  tc.seed = 1;
  GateModel gate = TrainGate(data, tc);
  CHECK(GateAccuracy(gate, data) >= 0.95);
}

TEST_CASE("corpus write failures name the path") {
  testing::TempDir dir;
  WriteFileAtomic(dir / "blocker", "x");
  SimConfig c;
  c.utterances_per_cell = 1;
  try {
    GenerateCorpus(c, dir / "blocker");
    FAIL("expected an IoError");
  } catch (const IoError &e) {
    CHECK(std::string(e.what()).find("blocker") != std::string::npos);
  }
}

}  // namespace gem
