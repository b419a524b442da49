// gating/emotion-gate.h

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

#ifndef GEM_GATING_EMOTION_GATE_H_
#define GEM_GATING_EMOTION_GATE_H_

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "base/emotion.h"
#include "expert/linear-expert.h"

namespace gem {

/// Raw emotion-classifier outputs in canonical emotion order.
struct EmotionLogits {
  std::array<double, kNumEmotions> z{};

  double operator[](Emotion e) const { return z[Index(e)]; }
  bool operator==(const EmotionLogits &) const = default;
};

/// Gating weights: strictly positive, summing to one.
struct EmotionProbabilities {
  std::array<double, kNumEmotions> p{};

  double operator[](Emotion e) const { return p[Index(e)]; }
  bool operator==(const EmotionProbabilities &) const = default;
};

/// Softmax temperature.  Construction rejects non-positive and non-finite
/// values with InputError.
class Temperature {
 public:
  explicit Temperature(double value);
  double value() const { return value_; }

  /// The configured inference temperature of the gate.
  static Temperature Default() { return Temperature(1.5); }

 private:
  double value_;
};

/// e_i = exp((z_i - max z) / T) / sum_j exp((z_j - max z) / T).
/// Terms that underflow are floored at the smallest normal double so every
/// output stays strictly positive.  InputError on a non-finite logit.
EmotionProbabilities Soften(const EmotionLogits &logits, Temperature t);
EmotionProbabilities Soften(const EmotionLogits &logits, double t);

/// Index of the largest logit; ties go to the lowest canonical index.
Emotion ArgmaxEmotion(const EmotionLogits &logits);

/// Multinomial-logistic emotion classifier: logits = W x + b.
struct GateModel {
  std::array<std::vector<double>, kNumEmotions> weights;
  std::array<double, kNumEmotions> bias{};

  size_t dim() const { return weights[0].size(); }
  static GateModel Zero(size_t dim);
  bool operator==(const GateModel &) const = default;
};

/// InputError on a dimension mismatch.
EmotionLogits GateLogits(const GateModel &gate, std::span<const double> x);

/// Soften(GateLogits(gate, x), t).
EmotionProbabilities GateProbs(const GateModel &gate, std::span<const double> x,
                               Temperature t);

struct GateGradient {
  double loss = 0.0;
  std::array<std::vector<double>, kNumEmotions> grad_weights;
  std::array<double, kNumEmotions> grad_bias{};
};

/// Mean multinomial cross-entropy (softmax at T = 1) against each example's
/// emotion, plus l2 * ||W||_F^2, with its gradient.
GateGradient GateLossAndGradient(const GateModel &gate, const TrainingSet &data,
                                 std::span<const size_t> batch, double l2);
GateGradient GateLossAndGradient(const GateModel &gate, const TrainingSet &data,
                                 double l2);

/// Desk-scale defaults for the gate's own training run.
TrainConfig GateTrainDefaults();

/// Seeded mini-batch descent from a zero gate.  TrainingError unless the
/// data holds at least two distinct emotions.
GateModel TrainGate(const TrainingSet &data, const TrainConfig &config);

/// Fraction of examples whose argmax logit matches their emotion.
double GateAccuracy(const GateModel &gate, const TrainingSet &data);

/// "gate", dim, then four lines (canonical order) of D weights followed by
/// the bias, space separated, 17 significant digits.
std::string FormatGate(const GateModel &gate);
GateModel ParseGate(const std::string &text, const std::string &source_name);
void WriteGate(const GateModel &gate, const std::filesystem::path &path);
GateModel ReadGate(const std::filesystem::path &path);

using LogitsTable = std::unordered_map<std::string, EmotionLogits>;

/// `utt_id<TAB>z_neutral<TAB>z_happy<TAB>z_angry<TAB>z_sad`.  FormatError
/// with the line number on a wrong column count or non-numeric value;
/// ValidationError on a duplicate id.
LogitsTable LoadLogits(const std::filesystem::path &path);
void WriteLogits(const std::vector<std::pair<std::string, EmotionLogits>> &rows,
                 const std::filesystem::path &path);

}  // namespace gem

#endif  // GEM_GATING_EMOTION_GATE_H_
