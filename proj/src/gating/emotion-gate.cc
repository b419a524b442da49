// gating/emotion-gate.cc

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

#include "gating/emotion-gate.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "base/batch-schedule.h"
#include "base/gem-common.h"
#include "base/text-utils.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;

Temperature::Temperature(double value) : value_(value) {
  if (!std::isfinite(value) || !(value > 0.0))
    throw InputError(StrCat("temperature must be a positive real, got ", value));
}

EmotionProbabilities Soften(const EmotionLogits &logits, Temperature t) {
  double max_z = logits.z[0];
  for (double z : logits.z) {
    if (!std::isfinite(z))
      throw InputError(StrCat("non-finite emotion logit ", z));
    max_z = std::max(max_z, z);
  }
  constexpr double kFloor = std::numeric_limits<double>::min();
  std::array<double, kNumEmotions> e{};
  double sum = 0.0;
  for (int i = 0; i < kNumEmotions; ++i) {
    e[i] = std::max(std::exp((logits.z[i] - max_z) / t.value()), kFloor);
    sum += e[i];
  }
  EmotionProbabilities probs;
  for (int i = 0; i < kNumEmotions; ++i) probs.p[i] = e[i] / sum;
  return probs;
}

EmotionProbabilities Soften(const EmotionLogits &logits, double t) {
  return Soften(logits, Temperature(t));
}

Emotion ArgmaxEmotion(const EmotionLogits &logits) {
  int best = 0;
  for (int i = 1; i < kNumEmotions; ++i)
    if (logits.z[i] > logits.z[best]) best = i;
  return static_cast<Emotion>(best);
}

GateModel GateModel::Zero(size_t dim) {
  GateModel g;
  for (auto &w : g.weights) w.assign(dim, 0.0);
  return g;
}

EmotionLogits GateLogits(const GateModel &gate, std::span<const double> x) {
  if (x.size() != gate.dim())
    throw InputError(StrCat("gate expects dimension ", gate.dim(), ", got ",
                            x.size()));
  EmotionLogits out;
  for (int k = 0; k < kNumEmotions; ++k) {
    double s = gate.bias[k];
    const auto &w = gate.weights[k];
    for (size_t d = 0; d < x.size(); ++d) s += w[d] * x[d];
    out.z[k] = s;
  }
  return out;
}

EmotionProbabilities GateProbs(const GateModel &gate, std::span<const double> x,
                               Temperature t) {
  return Soften(GateLogits(gate, x), t);
}

GateGradient GateLossAndGradient(const GateModel &gate, const TrainingSet &data,
                                 std::span<const size_t> batch, double l2) {
  const size_t dim = gate.dim();
  GateGradient g;
  for (auto &w : g.grad_weights) w.assign(dim, 0.0);
  if (batch.empty()) return g;
  for (size_t idx : batch) {
    const TrainingExample &ex = data[idx];
    EmotionLogits z = GateLogits(gate, ex.x.values);
    double max_z = *std::max_element(z.z.begin(), z.z.end());
    double sum = 0.0;
    for (double v : z.z) sum += std::exp(v - max_z);
    const double log_norm = max_z + std::log(sum);
    const int target = Index(ex.emotion);
    g.loss += log_norm - z.z[target];
    for (int k = 0; k < kNumEmotions; ++k) {
      double residual = std::exp(z.z[k] - log_norm) - (k == target ? 1.0 : 0.0);
      g.grad_bias[k] += residual;
      auto &gw = g.grad_weights[k];
      for (size_t d = 0; d < dim; ++d) gw[d] += residual * ex.x.values[d];
    }
  }
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  g.loss *= inv_n;
  double norm_sq = 0.0;
  for (int k = 0; k < kNumEmotions; ++k) {
    g.grad_bias[k] *= inv_n;
    for (size_t d = 0; d < dim; ++d) {
      const double w = gate.weights[k][d];
      g.grad_weights[k][d] = g.grad_weights[k][d] * inv_n + 2.0 * l2 * w;
      norm_sq += w * w;
    }
  }
  g.loss += l2 * norm_sq;
  return g;
}

GateGradient GateLossAndGradient(const GateModel &gate, const TrainingSet &data,
                                 double l2) {
  std::vector<size_t> all(data.size());
  std::iota(all.begin(), all.end(), size_t{0});
  return GateLossAndGradient(gate, data, all, l2);
}

TrainConfig GateTrainDefaults() {
  TrainConfig c;
  c.learning_rate = 0.05;
  c.batch_size = 32;
  c.epochs = 50;
  return c;
}

GateModel TrainGate(const TrainingSet &data, const TrainConfig &config) {
  config.Validate();
  if (data.empty()) throw TrainingError("train_gate: empty training set");
  std::set<Emotion> classes;
  for (const auto &ex : data) classes.insert(ex.emotion);
  if (classes.size() < 2)
    throw TrainingError(StrCat("train_gate: need at least two emotion classes, "
                               "got only ", EmotionName(*classes.begin())));
  const size_t dim = data.front().x.dim();
  for (size_t i = 0; i < data.size(); ++i)
    if (data[i].x.dim() != dim)
      throw InputError(StrCat("training example ", i, " has dimension ",
                              data[i].x.dim(), ", expected ", dim));

  GateModel gate = GateModel::Zero(dim);
  BatchSchedule schedule(data.size(), config.batch_size, config.seed);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    schedule.NextEpoch();
    for (size_t b = 0; b < schedule.NumBatches(); ++b) {
      GateGradient g = GateLossAndGradient(gate, data, schedule.Batch(b), config.l2);
      for (int k = 0; k < kNumEmotions; ++k) {
        for (size_t d = 0; d < dim; ++d)
          gate.weights[k][d] -= config.learning_rate * g.grad_weights[k][d];
        gate.bias[k] -= config.learning_rate * g.grad_bias[k];
      }
    }
  }
  for (int k = 0; k < kNumEmotions; ++k) {
    bool finite = std::isfinite(gate.bias[k]);
    for (double w : gate.weights[k]) finite = finite && std::isfinite(w);
    if (!finite)
      throw TrainingError("gate training diverged; lower the learning rate");
  }
  return gate;
}

double GateAccuracy(const GateModel &gate, const TrainingSet &data) {
  if (data.empty()) return 0.0;
  size_t correct = 0;
  for (const auto &ex : data)
    if (ArgmaxEmotion(GateLogits(gate, ex.x.values)) == ex.emotion) ++correct;
  return static_cast<double>(correct) / data.size();
}

std::string FormatGate(const GateModel &gate) {
  std::string out = "gate\n" + std::to_string(gate.dim()) + "\n";
  for (int k = 0; k < kNumEmotions; ++k) {
    for (double w : gate.weights[k]) out += FormatReal(w, 17) + " ";
    out += FormatReal(gate.bias[k], 17) + "\n";
  }
  return out;
}

GateModel ParseGate(const std::string &text, const std::string &src) {
  std::vector<std::string> lines = SplitString(text, '\n');
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.size() != 2 + kNumEmotions || Trim(lines[0]) != "gate")
    throw FormatError(StrCat(src, ": not a gate model file"));
  auto dim = ParseUint(lines[1]);
  if (!dim) throw FormatError(StrCat(src, ":2: bad dimension '", lines[1], "'"));
  GateModel gate = GateModel::Zero(*dim);
  for (int k = 0; k < kNumEmotions; ++k) {
    std::vector<std::string> f = SplitString(Trim(lines[2 + k]), ' ');
    if (f.size() != *dim + 1)
      throw FormatError(StrCat(src, ":", k + 3, ": expected ", *dim + 1,
                               " values, got ", f.size()));
    for (size_t d = 0; d <= *dim; ++d) {
      auto v = ParseFiniteDouble(f[d]);
      if (!v)
        throw FormatError(StrCat(src, ":", k + 3, ": bad value '", f[d], "'"));
      if (d < *dim) gate.weights[k][d] = *v;
      else gate.bias[k] = *v;
    }
  }
  return gate;
}

void WriteGate(const GateModel &gate, const fs::path &path) {
  WriteFileAtomic(path, FormatGate(gate));
}

GateModel ReadGate(const fs::path &path) {
  return ParseGate(ReadFileToString(path), path.string());
}

LogitsTable LoadLogits(const fs::path &path) {
  LogitsTable table;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    std::vector<std::string> f = SplitString(lines[i], '\t');
    if (f.size() != 1 + kNumEmotions)
      throw FormatError(StrCat(path.string(), ":", i + 1, ": expected 5 columns, got ",
                               f.size()));
    EmotionLogits z;
    for (int k = 0; k < kNumEmotions; ++k) {
      auto v = ParseFiniteDouble(f[1 + k]);
      if (!v)
        throw FormatError(StrCat(path.string(), ":", i + 1, ": bad logit '",
                                 f[1 + k], "'"));
      z.z[k] = *v;
    }
    if (!table.emplace(std::string(Trim(f[0])), z).second)
      throw ValidationError(StrCat(path.string(), ":", i + 1,
                                   ": duplicate utt_id ", f[0]));
  }
  return table;
}

void WriteLogits(const std::vector<std::pair<std::string, EmotionLogits>> &rows,
                 const fs::path &path) {
  std::string out;
  for (const auto &[id, z] : rows) {
    out += id;
    for (double v : z.z) out += "\t" + FormatReal(v, 9);
    out += "\n";
  }
  WriteFileAtomic(path, out);
}

}  // namespace gem
