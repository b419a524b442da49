// expert/linear-expert.h

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

#ifndef GEM_EXPERT_LINEAR_EXPERT_H_
#define GEM_EXPERT_LINEAR_EXPERT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "base/emotion.h"
#include "base/kv-config.h"
#include "features/feature-extractor.h"

namespace gem {

/// Logistic-linear anti-spoofing scorer: score(x) = sigmoid(w . x + b),
/// higher meaning more likely bona fide.
struct LinearExpert {
  std::vector<double> weights;
  double bias = 0.0;
  std::string tag;

  size_t dim() const { return weights.size(); }
  bool operator==(const LinearExpert &) const = default;
};

/// Overflow-free logistic function.
double Sigmoid(double z);

/// w . x + b.  InputError on a dimension mismatch.
double ExpertLogit(const LinearExpert &expert, std::span<const double> x);

/// sigmoid(w . x + b), clamped so the result stays strictly inside (0, 1).
double Score(const LinearExpert &expert, std::span<const double> x);

/// Hyper-parameters for mini-batch gradient descent.  The defaults are the
/// generalist stage; see Specialist() for the second stage.
struct TrainConfig {
  double learning_rate = 1e-4;
  size_t batch_size = 32;
  int epochs = 50;
  std::uint64_t seed = 0;
  double l2 = 1e-4;

  static TrainConfig Generalist() { return TrainConfig{}; }
  static TrainConfig Specialist() {
    TrainConfig c;
    c.batch_size = 8;
    c.epochs = 100;
    return c;
  }

  /// Reads "<prefix>lr", "<prefix>batch_size", "<prefix>epochs",
  /// "<prefix>l2" over the given defaults.  The seed is set by the caller.
  static TrainConfig FromConfig(const KeyValueConfig &config,
                                const std::string &prefix,
                                TrainConfig defaults);

  /// ConfigError unless lr > 0, batch_size >= 1, l2 >= 0 and epochs >= 1
  /// (or >= 0 when `allow_zero_epochs`).
  void Validate(bool allow_zero_epochs = false) const;
};

struct TrainingExample {
  FeatureVector x;
  Label label = Label::kBonafide;
  Emotion emotion = Emotion::kNeutral;
};

using TrainingSet = std::vector<TrainingExample>;

struct ExpertGradient {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

/// Mean binary cross-entropy over the selected examples (target 1 for
/// bona fide) plus l2 * ||w||^2, with its gradient.
ExpertGradient ExpertLossAndGradient(const LinearExpert &expert,
                                     const TrainingSet &data,
                                     std::span<const size_t> batch, double l2);

/// Same over the whole set.
ExpertGradient ExpertLossAndGradient(const LinearExpert &expert,
                                     const TrainingSet &data, double l2);

/// Stage one: trains from zero weights on all emotions.  TrainingError if
/// the set is empty or lacks one of the labels.
LinearExpert TrainGeneralist(const TrainingSet &data, const TrainConfig &config);

/// Stage two: continues descent from `base` on a single-emotion subset and
/// tags the result with the specialist name ("model-h", ...).  epochs = 0
/// is allowed here and returns the base parameters unchanged.  InputError
/// on a mixed-emotion subset; TrainingError on a single-class one.
LinearExpert Specialize(const LinearExpert &base, const TrainingSet &subset,
                        const TrainConfig &config);

/// Text model file: tag, dim, then one parameter per line (weights then
/// bias) with 17 significant digits, which round-trips exactly.
std::string FormatExpert(const LinearExpert &expert);
LinearExpert ParseExpert(const std::string &text, const std::string &source_name);
void WriteExpert(const LinearExpert &expert, const std::filesystem::path &path);
LinearExpert ReadExpert(const std::filesystem::path &path);

/// utt_id -> score.  Scores produced elsewhere are used as-is: any finite
/// real is accepted, polarity must be "higher = bona fide".
using ScoreTable = std::unordered_map<std::string, double>;

/// Two-column TSV `utt_id<TAB>score`.  FormatError with the line number on a
/// malformed or non-finite score; ValidationError on a duplicate id.
ScoreTable LoadScores(const std::filesystem::path &path);

/// Writes rows in the given order, scores with 9 significant digits.
void WriteScores(const std::vector<std::pair<std::string, double>> &rows,
                 const std::filesystem::path &path);

}  // namespace gem

#endif  // GEM_EXPERT_LINEAR_EXPERT_H_
