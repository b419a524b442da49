// metrics/eer.h

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

#ifndef GEM_METRICS_EER_H_
#define GEM_METRICS_EER_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "base/emotion.h"

namespace gem {

/// One evaluated trial.
struct ScoredTrial {
  std::string utt_id;
  double score = 0.0;
  Label label = Label::kBonafide;
  Emotion emotion = Emotion::kNeutral;
  std::string source_system;

  bool operator==(const ScoredTrial &) const = default;
};

/// One point of the threshold sweep.  A trial is accepted (called bona fide)
/// when score >= threshold.
struct OperatingPoint {
  double threshold = 0.0;
  /// Fraction of spoof trials accepted.
  double far = 0.0;
  /// Fraction of bona fide trials rejected.
  double frr = 0.0;
};

/**
   The full sweep: one point per distinct score (ascending), then a final
   point at +infinity where everything is rejected.  FAR is non-increasing
   and FRR non-decreasing along it.
*/
std::vector<OperatingPoint> SweepThresholds(std::span<const double> bonafide,
                                            std::span<const double> spoof);

struct EerResult {
  /// Percent, in [0, 100].
  double eer = 0.0;
  /// The first swept point with FAR <= FRR.  Deciding at this threshold
  /// reproduces that point's error counts.
  OperatingPoint point;
};

/**
   Equal error rate.  Walks the sweep to the first point where
   FAR - FRR <= 0; if it is exactly zero there the EER is that FAR,
   otherwise FAR is interpolated linearly between that point and the
   previous one, at the parameter where FAR - FRR crosses zero.

   The value depends only on the ranking of the scores, so any strictly
   increasing transform leaves it unchanged.  EvaluationError when either
   class is empty or a score is not finite.
*/
EerResult ComputeEer(std::span<const double> bonafide,
                     std::span<const double> spoof);

/// EER in percent over a trial list.
double Eer(std::span<const ScoredTrial> trials);

/// Scored-trials TSV: `utt_id score label emotion source_system`, with an
/// optional header line starting with "utt_id".
std::vector<ScoredTrial> ReadScoredTrials(const std::filesystem::path &path);
std::string FormatScoredTrials(std::span<const ScoredTrial> trials);
void WriteScoredTrials(std::span<const ScoredTrial> trials,
                       const std::filesystem::path &path);

}  // namespace gem

#endif  // GEM_METRICS_EER_H_
