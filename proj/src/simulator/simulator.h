// simulator/simulator.h

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

#ifndef GEM_SIMULATOR_SIMULATOR_H_
#define GEM_SIMULATOR_SIMULATOR_H_

// Synthetic data with known ground truth.
//
// gen_scores draws per-expert Gaussian scores whose parameters depend on
// (expert, true emotion, label), together with gate logits that favour the
// true emotion by a fixed margin.  gen_corpus writes short tone-mixture WAV
// files whose emotion is the frequency band of the tones and whose spoof
// label is an extra artifact tone.
//
// Every (expert, emotion, label) cell and every utterance draws from its own
// generator stream, seeded from (seed, cell coordinates), so resizing one
// cell leaves the draws of all other cells untouched.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "base/emotion.h"
#include "base/kv-config.h"
#include "expert/linear-expert.h"
#include "features/wave-io.h"
#include "gating/emotion-gate.h"
#include "manifest/manifest.h"
#include "metrics/eer.h"

namespace gem {

struct GaussianParams {
  double mean = 0.0;
  double stddev = 1.0;
};

struct SimConfig {
  std::uint64_t seed = 0;

  /// score_params[expert][true emotion][label]; label index 0 = bonafide.
  std::array<std::array<std::array<GaussianParams, 2>, kNumEmotions>,
             kNumEmotions>
      score_params;
  size_t trials_per_cell = 200;
  /// Logit margin of the true emotion over the others.
  double gate_logit_gap = 20.0;
  /// Std of Gaussian noise added to every logit; 0 keeps logits exact.
  double gate_logit_noise = 0.0;
  std::string spoof_system = "simtts";

  // Synthetic audio.
  std::array<std::pair<double, double>, kNumEmotions> emotion_bands = {
      {{200.0, 400.0}, {500.0, 900.0}, {1000.0, 1800.0}, {2000.0, 3200.0}}};
  double noise_level = 0.01;
  double artifact_level = 0.05;
  double utterance_seconds = 1.0;
  int sample_rate = 16000;
  size_t utterances_per_cell = 10;
  int num_speakers = 2;

  SimConfig();

  /// Specialists (expert i on emotion i) use the `specialist` pair, every
  /// other expert/emotion combination the `off` pair.
  void SetScoreParams(GaussianParams specialist_bonafide,
                      GaussianParams specialist_spoof,
                      GaussianParams off_bonafide, GaussianParams off_spoof);

  GaussianParams &Params(Emotion expert, Emotion emotion, Label label) {
    return score_params[Index(expert)][Index(emotion)][static_cast<int>(label)];
  }
  const GaussianParams &Params(Emotion expert, Emotion emotion,
                               Label label) const {
    return score_params[Index(expert)][Index(emotion)][static_cast<int>(label)];
  }

  /// ConfigError on std <= 0, zero counts, a negative gap, overlapping or
  /// out-of-range bands, or non-positive durations.
  void Validate() const;

  /// Reads "<prefix>..." keys over the defaults (see README for the list).
  static SimConfig FromConfig(const KeyValueConfig &config,
                              const std::string &prefix);
  /// Keys understood by FromConfig, for unknown-key checks.
  static std::vector<std::string> KnownKeys(const std::string &prefix);
};

/// Ground-truth EER (percent) of two Gaussian score distributions under the
/// accept-if-score >= t rule: Phi(-(mu_b - mu_s) / (sigma_b + sigma_s)).
double AnalyticGaussianEer(GaussianParams bonafide, GaussianParams spoof);

/// Standard normal CDF.
double NormalCdf(double x);

struct SyntheticBatch {
  /// Trials ordered by (emotion, label, index); no audio paths.
  Manifest trials;
  /// expert_scores[i][n] is expert i's raw score on trials.records()[n].
  std::array<std::vector<ScoredTrial>, kNumEmotions> expert_scores;
  /// Aligned with trials.
  std::vector<EmotionLogits> logits;
  SimConfig truth;

  ScoreTable ExpertTable(Emotion expert) const;
  LogitsTable Logits() const;
};

SyntheticBatch GenerateScores(const SimConfig &config);

/// Clamps into (1e-9, 1 - 1e-9) for consumers that need scores in (0, 1).
double ClampToUnitInterval(double score);

/// Synthesises one utterance.  Deterministic in (config, emotion, label,
/// index).
Waveform SynthesizeUtterance(const SimConfig &config, Emotion emotion,
                             Label label, size_t index);

/// Writes wav/<utt_id>.wav for every (emotion, label, index) under
/// `out_dir` plus manifest.csv referencing them with relative paths.
/// Returns the manifest.  IoError naming the path on any write failure.
Manifest GenerateCorpus(const SimConfig &config,
                        const std::filesystem::path &out_dir, int jobs = 1);

}  // namespace gem

#endif  // GEM_SIMULATOR_SIMULATOR_H_
