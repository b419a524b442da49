// expert/linear-expert.cc

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

#include "expert/linear-expert.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "base/batch-schedule.h"
#include "base/gem-common.h"
#include "base/text-utils.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;

double Sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(z)) without overflow.
double Softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void CheckTwoClasses(const TrainingSet &data, const char *what) {
  if (data.empty()) throw TrainingError(StrCat(what, ": empty training set"));
  bool has_bona = false, has_spoof = false;
  for (const auto &ex : data) {
    if (ex.label == Label::kBonafide) has_bona = true;
    else has_spoof = true;
  }
  if (!has_bona || !has_spoof)
    throw TrainingError(StrCat(what, ": training set contains only ",
                               has_bona ? "bonafide" : "spoof", " trials"));
}

void CheckDims(const LinearExpert &expert, const TrainingSet &data) {
  for (size_t i = 0; i < data.size(); ++i)
    if (data[i].x.dim() != expert.dim())
      throw InputError(StrCat("training example ", i, " has dimension ",
                              data[i].x.dim(), ", expected ", expert.dim()));
}

void Descend(LinearExpert *expert, const TrainingSet &data,
             const TrainConfig &config) {
  BatchSchedule schedule(data.size(), config.batch_size, config.seed);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    schedule.NextEpoch();
    for (size_t b = 0; b < schedule.NumBatches(); ++b) {
      ExpertGradient g =
          ExpertLossAndGradient(*expert, data, schedule.Batch(b), config.l2);
      for (size_t d = 0; d < expert->dim(); ++d)
        expert->weights[d] -= config.learning_rate * g.grad_weights[d];
      expert->bias -= config.learning_rate * g.grad_bias;
    }
  }
  for (double w : expert->weights)
    if (!std::isfinite(w))
      throw TrainingError(StrCat("training of ", expert->tag,
                                 " diverged; lower the learning rate"));
  if (!std::isfinite(expert->bias))
    throw TrainingError(StrCat("training of ", expert->tag, " diverged"));
}

}  // namespace

double ExpertLogit(const LinearExpert &expert, std::span<const double> x) {
  if (x.size() != expert.dim())
    throw InputError(StrCat("expert ", expert.tag, " expects dimension ",
                            expert.dim(), ", got ", x.size()));
  return Dot(expert.weights, x) + expert.bias;
}

double Score(const LinearExpert &expert, std::span<const double> x) {
  // Kept strictly inside (0, 1) even when the logistic saturates.
  constexpr double kLow = std::numeric_limits<double>::min();
  constexpr double kHigh = 1.0 - std::numeric_limits<double>::epsilon() / 2;
  return std::clamp(Sigmoid(ExpertLogit(expert, x)), kLow, kHigh);
}

TrainConfig TrainConfig::FromConfig(const KeyValueConfig &c,
                                    const std::string &prefix,
                                    TrainConfig defaults) {
  TrainConfig t = defaults;
  t.learning_rate = c.GetDouble(prefix + "lr", t.learning_rate);
  t.batch_size = c.GetUint(prefix + "batch_size", t.batch_size);
  t.epochs = static_cast<int>(c.GetInt(prefix + "epochs", t.epochs));
  t.l2 = c.GetDouble(prefix + "l2", t.l2);
  return t;
}

void TrainConfig::Validate(bool allow_zero_epochs) const {
  if (!(learning_rate > 0.0))
    throw ConfigError(StrCat("learning rate must be > 0, got ", learning_rate));
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (epochs < (allow_zero_epochs ? 0 : 1))
    throw ConfigError(StrCat("epochs must be >= ", allow_zero_epochs ? 0 : 1,
                             ", got ", epochs));
  if (!(l2 >= 0.0)) throw ConfigError(StrCat("l2 must be >= 0, got ", l2));
}

ExpertGradient ExpertLossAndGradient(const LinearExpert &expert,
                                     const TrainingSet &data,
                                     std::span<const size_t> batch, double l2) {
  ExpertGradient g;
  g.grad_weights.assign(expert.dim(), 0.0);
  if (batch.empty()) return g;
  for (size_t idx : batch) {
    const TrainingExample &ex = data[idx];
    double z = ExpertLogit(expert, ex.x.values);
    double target = ex.label == Label::kBonafide ? 1.0 : 0.0;
    g.loss += Softplus(z) - target * z;
    double residual = Sigmoid(z) - target;
    for (size_t d = 0; d < expert.dim(); ++d)
      g.grad_weights[d] += residual * ex.x.values[d];
    g.grad_bias += residual;
  }
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  g.loss *= inv_n;
  g.grad_bias *= inv_n;
  double norm_sq = 0.0;
  for (size_t d = 0; d < expert.dim(); ++d) {
    g.grad_weights[d] = g.grad_weights[d] * inv_n + 2.0 * l2 * expert.weights[d];
    norm_sq += expert.weights[d] * expert.weights[d];
  }
  g.loss += l2 * norm_sq;
  return g;
}

ExpertGradient ExpertLossAndGradient(const LinearExpert &expert,
                                     const TrainingSet &data, double l2) {
  std::vector<size_t> all(data.size());
  std::iota(all.begin(), all.end(), size_t{0});
  return ExpertLossAndGradient(expert, data, all, l2);
}

LinearExpert TrainGeneralist(const TrainingSet &data, const TrainConfig &config) {
  config.Validate();
  CheckTwoClasses(data, "train_generalist");
  LinearExpert expert;
  expert.tag = "generalist";
  expert.weights.assign(data.front().x.dim(), 0.0);
  CheckDims(expert, data);
  Descend(&expert, data, config);
  return expert;
}

LinearExpert Specialize(const LinearExpert &base, const TrainingSet &subset,
                        const TrainConfig &config) {
  config.Validate(/*allow_zero_epochs=*/true);
  if (subset.empty()) throw TrainingError("specialize: empty training subset");
  const Emotion emotion = subset.front().emotion;
  for (const auto &ex : subset)
    if (ex.emotion != emotion)
      throw InputError(StrCat("specialize: subset mixes ", EmotionName(emotion),
                              " and ", EmotionName(ex.emotion), " trials"));
  CheckTwoClasses(subset, "specialize");
  CheckDims(base, subset);
  LinearExpert expert = base;
  expert.tag = SpecialistTag(emotion);
  Descend(&expert, subset, config);
  return expert;
}

std::string FormatExpert(const LinearExpert &expert) {
  std::string out = expert.tag + "\n" + std::to_string(expert.dim()) + "\n";
  for (double w : expert.weights) out += FormatReal(w, 17) + "\n";
  out += FormatReal(expert.bias, 17) + "\n";
  return out;
}

LinearExpert ParseExpert(const std::string &text, const std::string &src) {
  std::vector<std::string> lines = SplitString(text, '\n');
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.size() < 3) throw FormatError(StrCat(src, ": truncated model file"));
  LinearExpert expert;
  expert.tag = std::string(Trim(lines[0]));
  if (expert.tag.empty()) throw FormatError(StrCat(src, ":1: empty tag"));
  auto dim = ParseUint(lines[1]);
  if (!dim) throw FormatError(StrCat(src, ":2: bad dimension '", lines[1], "'"));
  if (lines.size() != *dim + 3)
    throw FormatError(StrCat(src, ": expected ", *dim + 1, " parameters, found ",
                             lines.size() - 2));
  expert.weights.resize(*dim);
  for (size_t i = 0; i <= *dim; ++i) {
    auto v = ParseFiniteDouble(lines[i + 2]);
    if (!v)
      throw FormatError(StrCat(src, ":", i + 3, ": bad parameter '",
                               lines[i + 2], "'"));
    if (i < *dim) expert.weights[i] = *v;
    else expert.bias = *v;
  }
  return expert;
}

void WriteExpert(const LinearExpert &expert, const fs::path &path) {
  WriteFileAtomic(path, FormatExpert(expert));
}

LinearExpert ReadExpert(const fs::path &path) {
  return ParseExpert(ReadFileToString(path), path.string());
}

ScoreTable LoadScores(const fs::path &path) {
  ScoreTable table;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    std::vector<std::string> f = SplitString(lines[i], '\t');
    if (f.size() != 2)
      throw FormatError(StrCat(path.string(), ":", i + 1,
                               ": expected 'utt_id<TAB>score', got ", f.size(),
                               " columns"));
    auto v = ParseFiniteDouble(f[1]);
    if (!v)
      throw FormatError(StrCat(path.string(), ":", i + 1, ": bad score '", f[1],
                               "'"));
    if (!table.emplace(std::string(Trim(f[0])), *v).second)
      throw ValidationError(StrCat(path.string(), ":", i + 1,
                                   ": duplicate utt_id ", f[0]));
  }
  return table;
}

void WriteScores(const std::vector<std::pair<std::string, double>> &rows,
                 const fs::path &path) {
  std::string out;
  for (const auto &[id, score] : rows) out += id + "\t" + FormatReal(score, 9) + "\n";
  WriteFileAtomic(path, out);
}

}  // namespace gem
