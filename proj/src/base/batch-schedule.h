// base/batch-schedule.h

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

#ifndef GEM_BASE_BATCH_SCHEDULE_H_
#define GEM_BASE_BATCH_SCHEDULE_H_

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "base/rng.h"

namespace gem {

/// Mini-batch order for one training run: each epoch applies a seeded
/// Fisher-Yates shuffle to the running permutation and cuts it into
/// batches of `batch_size`; the last short batch is kept.
class BatchSchedule {
 public:
  BatchSchedule(size_t num_examples, size_t batch_size, std::uint64_t seed)
      : order_(num_examples), batch_size_(std::max<size_t>(batch_size, 1)),
        rng_(seed) {
    std::iota(order_.begin(), order_.end(), size_t{0});
  }

  /// Reshuffles; call once at the start of every epoch.
  void NextEpoch() {
    for (size_t i = order_.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(rng_.UniformInt(i));
      std::swap(order_[i - 1], order_[j]);
    }
  }

  size_t NumBatches() const {
    return (order_.size() + batch_size_ - 1) / batch_size_;
  }

  std::span<const size_t> Batch(size_t b) const {
    size_t begin = b * batch_size_;
    size_t end = std::min(order_.size(), begin + batch_size_);
    return std::span<const size_t>(order_).subspan(begin, end - begin);
  }

 private:
  std::vector<size_t> order_;
  size_t batch_size_;
  Rng rng_;
};

}  // namespace gem

#endif  // GEM_BASE_BATCH_SCHEDULE_H_
