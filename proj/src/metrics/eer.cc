// metrics/eer.cc

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

#include "metrics/eer.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "base/gem-common.h"
#include "base/text-utils.h"

namespace gem {

using internal::StrCat;

std::vector<OperatingPoint> SweepThresholds(std::span<const double> bonafide,
                                            std::span<const double> spoof) {
  std::vector<double> bona(bonafide.begin(), bonafide.end());
  std::vector<double> fake(spoof.begin(), spoof.end());
  std::sort(bona.begin(), bona.end());
  std::sort(fake.begin(), fake.end());
  const double nb = static_cast<double>(bona.size());
  const double ns = static_cast<double>(fake.size());

  std::vector<OperatingPoint> points;
  points.reserve(bona.size() + fake.size() + 1);
  // ib = #bonafide < t (rejected), is = #spoof < t; both only grow with t.
  size_t ib = 0, is = 0;
  while (ib < bona.size() || is < fake.size()) {
    double t;
    if (ib == bona.size()) t = fake[is];
    else if (is == fake.size()) t = bona[ib];
    else t = std::min(bona[ib], fake[is]);
    points.push_back({t, (ns - is) / ns, ib / nb});
    while (ib < bona.size() && bona[ib] == t) ++ib;
    while (is < fake.size() && fake[is] == t) ++is;
  }
  points.push_back({std::numeric_limits<double>::infinity(), 0.0, 1.0});
  return points;
}

EerResult ComputeEer(std::span<const double> bonafide,
                     std::span<const double> spoof) {
  if (bonafide.empty() || spoof.empty())
    throw EvaluationError(StrCat("EER needs both classes (", bonafide.size(),
                                 " bonafide, ", spoof.size(), " spoof trials)"));
  for (double s : bonafide)
    if (!std::isfinite(s)) throw EvaluationError("non-finite bonafide score");
  for (double s : spoof)
    if (!std::isfinite(s)) throw EvaluationError("non-finite spoof score");

  const std::vector<OperatingPoint> points = SweepThresholds(bonafide, spoof);
  // The first point has FRR = 0 and FAR = 1 > 0, the last FAR = 0 and
  // FRR = 1, so a sign change always exists and i >= 1 below.
  size_t i = 0;
  while (points[i].far - points[i].frr > 0.0) ++i;
  EerResult result;
  result.point = points[i];
  const double d_hi = points[i].far - points[i].frr;
  if (d_hi == 0.0) {
    result.eer = 100.0 * points[i].far;
    return result;
  }
  const OperatingPoint &lo = points[i - 1];
  const double d_lo = lo.far - lo.frr;
  const double alpha = d_lo / (d_lo - d_hi);
  result.eer = 100.0 * (lo.far + alpha * (points[i].far - lo.far));
  return result;
}

double Eer(std::span<const ScoredTrial> trials) {
  std::vector<double> bona, spoof;
  for (const ScoredTrial &t : trials)
    (t.label == Label::kBonafide ? bona : spoof).push_back(t.score);
  return ComputeEer(bona, spoof).eer;
}

std::vector<ScoredTrial> ReadScoredTrials(const std::filesystem::path &path) {
  std::vector<std::string> lines = ReadLines(path);
  std::vector<ScoredTrial> trials;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    std::vector<std::string> f = SplitString(lines[i], '\t');
    if (i == 0 && !f.empty() && f[0] == "utt_id") continue;
    if (f.size() != 5)
      throw FormatError(StrCat(path.string(), ":", i + 1,
                               ": expected 5 columns, got ", f.size()));
    ScoredTrial t;
    t.utt_id = f[0];
    auto score = ParseFiniteDouble(f[1]);
    auto label = ParseLabel(f[2]);
    auto emotion = ParseEmotion(f[3]);
    if (!score || !label || !emotion)
      throw FormatError(StrCat(path.string(), ":", i + 1, ": malformed trial row"));
    t.score = *score;
    t.label = *label;
    t.emotion = *emotion;
    t.source_system = f[4];
    trials.push_back(std::move(t));
  }
  return trials;
}

std::string FormatScoredTrials(std::span<const ScoredTrial> trials) {
  std::string out = "utt_id\tscore\tlabel\temotion\tsource_system\n";
  for (const ScoredTrial &t : trials) {
    out += t.utt_id + "\t" + FormatReal(t.score, 9) + "\t";
    out += LabelName(t.label);
    out += "\t";
    out += EmotionName(t.emotion);
    out += "\t" + t.source_system + "\n";
  }
  return out;
}

void WriteScoredTrials(std::span<const ScoredTrial> trials,
                       const std::filesystem::path &path) {
  WriteFileAtomic(path, FormatScoredTrials(trials));
}

}  // namespace gem
