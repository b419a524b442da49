// tests/sim-helpers.h

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

#ifndef GEM_TESTS_SIM_HELPERS_H_
#define GEM_TESTS_SIM_HELPERS_H_

// Shared pieces for tests that fuse simulated batches.

#include <algorithm>
#include <vector>

#include "ensemble/gated-ensemble.h"
#include "metrics/eer.h"
#include "simulator/simulator.h"

namespace gem {
namespace testing {

/// GEM scores for every trial of the batch, in trial order.
inline std::vector<ScoredTrial> FuseBatch(const SyntheticBatch &batch,
                                          double temperature) {
  std::vector<ScoredTrial> out;
  const auto &records = batch.trials.records();
  for (size_t n = 0; n < records.size(); ++n) {
    ExpertScores s;
    for (Emotion e : kAllEmotions) s[Index(e)] = batch.expert_scores[Index(e)][n].score;
    ScoredTrial t = batch.expert_scores[0][n];
    t.score = Fuse(s, Soften(batch.logits[n], temperature));
    out.push_back(t);
  }
  return out;
}

inline std::vector<ScoredTrial> OfEmotion(const std::vector<ScoredTrial> &trials,
                                          Emotion e) {
  std::vector<ScoredTrial> out;
  for (const auto &t : trials)
    if (t.emotion == e) out.push_back(t);
  return out;
}

/// Specialist per-emotion EER plus the margin below every other expert's EER
/// on that emotion, for all four emotions.
inline bool SpecialistAdvantage(const SyntheticBatch &batch, double margin = 5.0) {
  for (Emotion e : kAllEmotions) {
    const double own = Eer(OfEmotion(batch.expert_scores[Index(e)], e));
    for (Emotion other : kAllEmotions) {
      if (other == e) continue;
      if (!(own + margin < Eer(OfEmotion(batch.expert_scores[Index(other)], e))))
        return false;
    }
  }
  return true;
}

inline double MinSingleExpertEer(const SyntheticBatch &batch) {
  double best = 100.0;
  for (Emotion e : kAllEmotions)
    best = std::min(best, Eer(batch.expert_scores[Index(e)]));
  return best;
}

}  // namespace testing
}  // namespace gem

#endif  // GEM_TESTS_SIM_HELPERS_H_
