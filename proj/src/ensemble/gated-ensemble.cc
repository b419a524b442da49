// ensemble/gated-ensemble.cc

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

#include "ensemble/gated-ensemble.h"

#include <algorithm>
#include <cmath>

#include "base/gem-common.h"
#include "base/text-utils.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;

double Fuse(const ExpertScores &scores, const EmotionProbabilities &gating) {
  double total = 0.0;
  for (int i = 0; i < kNumEmotions; ++i) {
    if (!std::isfinite(scores[i]))
      throw InputError(StrCat("non-finite expert score for ",
                              EmotionName(static_cast<Emotion>(i))));
    if (!(gating.p[i] > 0.0) || !std::isfinite(gating.p[i]))
      throw InputError(StrCat("gating weight ", gating.p[i], " for ",
                              EmotionName(static_cast<Emotion>(i)),
                              " is not a positive probability"));
    total += gating.p[i];
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InputError(StrCat("gating weights sum to ", FormatReal(total, 17)));

  double fused = 0.0;
  for (int i = 0; i < kNumEmotions; ++i) fused += scores[i] * gating.p[i];
  auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
  return std::clamp(fused, *lo, *hi);
}

void ExpertRegistry::Add(Emotion emotion, LinearExpert expert) {
  auto &slot = slots_[Index(emotion)];
  if (slot)
    throw ConfigError(StrCat("expert for ", EmotionName(emotion),
                             " registered twice"));
  origins_[Index(emotion)] = expert.tag;
  slot = std::move(expert);
}

void ExpertRegistry::Add(Emotion emotion, ScoreTable scores, std::string origin) {
  auto &slot = slots_[Index(emotion)];
  if (slot)
    throw ConfigError(StrCat("expert for ", EmotionName(emotion),
                             " registered twice"));
  origins_[Index(emotion)] = std::move(origin);
  slot = std::move(scores);
}

void ExpertRegistry::Validate() const {
  size_t dim = 0;
  for (Emotion e : kAllEmotions) {
    const auto &slot = slots_[Index(e)];
    if (!slot)
      throw ConfigError(StrCat("no expert registered for ", EmotionName(e)));
    if (const auto *m = std::get_if<LinearExpert>(&*slot)) {
      if (dim != 0 && m->dim() != dim)
        throw ConfigError(StrCat("expert ", m->tag, " has dimension ", m->dim(),
                                 ", others have ", dim));
      dim = m->dim();
    }
  }
}

bool ExpertRegistry::NeedsFeatures() const {
  for (const auto &slot : slots_)
    if (slot && std::holds_alternative<LinearExpert>(*slot)) return true;
  return false;
}

size_t ExpertRegistry::dim() const {
  for (const auto &slot : slots_)
    if (slot)
      if (const auto *m = std::get_if<LinearExpert>(&*slot)) return m->dim();
  return 0;
}

ExpertScores ExpertRegistry::ScoreAll(const std::string &utt_id,
                                      std::span<const double> features) const {
  ExpertScores s{};
  for (Emotion e : kAllEmotions) {
    const int i = Index(e);
    if (!slots_[i])
      throw ConfigError(StrCat("no expert registered for ", EmotionName(e)));
    if (const auto *m = std::get_if<LinearExpert>(&*slots_[i])) {
      s[i] = Score(*m, features);
    } else {
      const auto &table = std::get<ScoreTable>(*slots_[i]);
      auto it = table.find(utt_id);
      if (it == table.end())
        throw ValidationError(StrCat("trial ", utt_id, " missing from ",
                                     EmotionName(e), " expert scores ",
                                     origins_[i]));
      s[i] = it->second;
    }
  }
  return s;
}

EmotionLogits LogitsFor(const GateSource &gate, const std::string &utt_id,
                        std::span<const double> features) {
  if (const auto *m = std::get_if<GateModel>(&gate)) return GateLogits(*m, features);
  const auto &table = std::get<LogitsTable>(gate);
  auto it = table.find(utt_id);
  if (it == table.end())
    throw ValidationError(StrCat("trial ", utt_id, " missing from gate logits"));
  return it->second;
}

Decision Decide(double fused, double threshold) {
  if (!std::isfinite(threshold))
    throw InputError(StrCat("decision threshold must be finite, got ", threshold));
  return fused >= threshold ? Decision::kAuthentic : Decision::kSpoof;
}

FusionResult GemScore(const std::string &utt_id, std::span<const double> x,
                      const ExpertRegistry &registry, const GateSource &gate,
                      Temperature t) {
  FusionResult r;
  r.utt_id = utt_id;
  r.scores = registry.ScoreAll(utt_id, x);
  r.gating = Soften(LogitsFor(gate, utt_id, x), t);
  r.fused = Fuse(r.scores, r.gating);
  return r;
}

FusionResult GemScore(const FeatureVector &x, const ExpertRegistry &registry,
                      const GateModel &gate, Temperature t) {
  FusionResult r;
  r.scores = registry.ScoreAll("", x.values);
  r.gating = GateProbs(gate, x.values, t);
  r.fused = Fuse(r.scores, r.gating);
  return r;
}

namespace {

FusionResult HardFromLogits(std::string utt_id, const ExpertScores &scores,
                            const EmotionLogits &logits) {
  FusionResult r;
  r.utt_id = std::move(utt_id);
  r.scores = scores;
  for (double s : scores)
    if (!std::isfinite(s)) throw InputError("non-finite expert score");
  const int k = Index(ArgmaxEmotion(logits));
  r.gating.p.fill(0.0);
  r.gating.p[k] = 1.0;
  r.fused = scores[k];
  return r;
}

}  // namespace

FusionResult HardGateScore(const FeatureVector &x, const ExpertRegistry &registry,
                           const GateModel &gate) {
  return HardFromLogits("", registry.ScoreAll("", x.values),
                        GateLogits(gate, x.values));
}

FusionResult HardGateScore(const std::string &utt_id, std::span<const double> x,
                           const ExpertRegistry &registry,
                           const GateSource &gate) {
  return HardFromLogits(utt_id, registry.ScoreAll(utt_id, x),
                        LogitsFor(gate, utt_id, x));
}

std::string FormatFusionResults(const std::vector<FusionResult> &results) {
  std::string out(kFusionHeader);
  out += '\n';
  for (const FusionResult &r : results) {
    out += r.utt_id;
    for (double s : r.scores) out += "\t" + FormatReal(s, 9);
    for (double e : r.gating.p) out += "\t" + FormatReal(e, 9);
    out += "\t" + FormatReal(r.fused, 9) + "\n";
  }
  return out;
}

void WriteFusionResults(const std::vector<FusionResult> &results,
                        const fs::path &path) {
  WriteFileAtomic(path, FormatFusionResults(results));
}

std::vector<FusionResult> ReadFusionResults(const fs::path &path) {
  std::vector<std::string> lines = ReadLines(path);
  if (lines.empty() || lines[0] != kFusionHeader)
    throw FormatError(StrCat(path.string(), ": missing fusion header"));
  std::vector<FusionResult> results;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    std::vector<std::string> f = SplitString(lines[i], '\t');
    if (f.size() != 10)
      throw FormatError(StrCat(path.string(), ":", i + 1,
                               ": expected 10 columns, got ", f.size()));
    FusionResult r;
    r.utt_id = f[0];
    std::array<double, 9> v{};
    for (size_t j = 0; j < 9; ++j) {
      auto d = ParseFiniteDouble(f[j + 1]);
      if (!d)
        throw FormatError(StrCat(path.string(), ":", i + 1, ": bad value '",
                                 f[j + 1], "'"));
      v[j] = *d;
    }
    for (int k = 0; k < kNumEmotions; ++k) {
      r.scores[k] = v[k];
      r.gating.p[k] = v[4 + k];
    }
    r.fused = v[8];
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace gem
