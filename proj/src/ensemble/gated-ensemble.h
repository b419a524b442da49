// ensemble/gated-ensemble.h

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

#ifndef GEM_ENSEMBLE_GATED_ENSEMBLE_H_
#define GEM_ENSEMBLE_GATED_ENSEMBLE_H_

// Gated ensemble of emotion-specialised experts.
//
// Every expert scores the trial; the emotion gate turns its logits into
// probabilities with a temperature softmax; the decision score is the
// probability-weighted average of the expert scores.  The hard-gate variant
// keeps only the expert of the most probable emotion and exists as an
// ablation baseline.
//
// Scores are polarity sensitive: all experts must agree that higher means
// more likely bona fide.

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "base/emotion.h"
#include "expert/linear-expert.h"
#include "gating/emotion-gate.h"

namespace gem {

using ExpertScores = std::array<double, kNumEmotions>;

/// sum_i scores_i * gating_i, clamped into [min scores, max scores] so the
/// result is a convex combination even under rounding.  InputError on a
/// non-finite score or on gating that is not a probability vector
/// (entries > 0, sum within 1e-9 of one).
double Fuse(const ExpertScores &scores, const EmotionProbabilities &gating);

/// Either a model evaluated on features or a table of precomputed scores.
using ExpertSource = std::variant<LinearExpert, ScoreTable>;

/// One scorer per emotion, bound by canonical order.  Duplicates are
/// rejected on insertion; gaps are rejected by Validate().
class ExpertRegistry {
 public:
  void Add(Emotion emotion, LinearExpert expert);
  /// `origin` names the table in error messages (usually its path).
  void Add(Emotion emotion, ScoreTable scores, std::string origin);

  bool Has(Emotion emotion) const { return slots_[Index(emotion)].has_value(); }

  /// ConfigError naming the first missing emotion, or when internal experts
  /// disagree on dimension.
  void Validate() const;

  /// True if any slot holds a model (and so needs features).
  bool NeedsFeatures() const;

  /// Feature dimension of the internal experts; 0 when all are tables.
  size_t dim() const;

  /// Scores every expert on one trial.  A table lacking `utt_id` is a
  /// ValidationError: missing trials are never imputed.
  ExpertScores ScoreAll(const std::string &utt_id,
                        std::span<const double> features) const;

 private:
  std::array<std::optional<ExpertSource>, kNumEmotions> slots_;
  std::array<std::string, kNumEmotions> origins_;
};

/// Either a gate model evaluated on features or precomputed logits.
using GateSource = std::variant<GateModel, LogitsTable>;

EmotionLogits LogitsFor(const GateSource &gate, const std::string &utt_id,
                        std::span<const double> features);

enum class Decision : int { kSpoof = 0, kAuthentic = 1 };

/// kAuthentic when fused >= threshold.  InputError on a non-finite threshold.
Decision Decide(double fused, double threshold);

struct FusionResult {
  std::string utt_id;
  ExpertScores scores{};
  EmotionProbabilities gating;
  double fused = 0.0;
  std::optional<Decision> decision;
};

/// Soft gating: gating = Soften(logits, t), fused = Fuse(scores, gating).
FusionResult GemScore(const FeatureVector &x, const ExpertRegistry &registry,
                      const GateModel &gate, Temperature t);
FusionResult GemScore(const std::string &utt_id, std::span<const double> x,
                      const ExpertRegistry &registry, const GateSource &gate,
                      Temperature t);

/// Hard gating: fused = score of the argmax-logit expert (ties to the lowest
/// emotion index); the stored gating is the matching one-hot vector.
FusionResult HardGateScore(const FeatureVector &x, const ExpertRegistry &registry,
                           const GateModel &gate);
FusionResult HardGateScore(const std::string &utt_id, std::span<const double> x,
                           const ExpertRegistry &registry,
                           const GateSource &gate);

/// Header plus one row per result:
/// utt_id S_n S_h S_a S_s E_n E_h E_a E_s y_s (tab separated, 9 digits).
std::string FormatFusionResults(const std::vector<FusionResult> &results);
void WriteFusionResults(const std::vector<FusionResult> &results,
                        const std::filesystem::path &path);
std::vector<FusionResult> ReadFusionResults(const std::filesystem::path &path);

inline constexpr std::string_view kFusionHeader =
    "utt_id\tS_n\tS_h\tS_a\tS_s\tE_n\tE_h\tE_a\tE_s\ty_s";

}  // namespace gem

#endif  // GEM_ENSEMBLE_GATED_ENSEMBLE_H_
