// base/gem-common.cc

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

#include "base/gem-common.h"

#include <atomic>
#include <mutex>

namespace gem {

namespace {
std::atomic<long> g_warning_count{0};
std::mutex g_warn_mutex;
}  // namespace

bool &WarningsEnabled() {
  static bool enabled = true;
  return enabled;
}

long WarningCount() { return g_warning_count.load(); }

void EmitWarning(const std::string &msg) {
  ++g_warning_count;
  if (!WarningsEnabled()) return;
  std::lock_guard<std::mutex> lock(g_warn_mutex);
  std::cerr << "WARNING: " << msg << '\n';
}

}  // namespace gem
