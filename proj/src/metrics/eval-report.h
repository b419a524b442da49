// metrics/eval-report.h

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

#ifndef GEM_METRICS_EVAL_REPORT_H_
#define GEM_METRICS_EVAL_REPORT_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "metrics/eer.h"

namespace gem {

/// One table cell.  `eer` is absent when the cell lacks either class.
struct EerCell {
  std::optional<double> eer;
  size_t n_bonafide = 0;
  size_t n_spoof = 0;

  bool operator==(const EerCell &) const = default;
};

/// HAS, the four emotions, and Overall.
struct ReportRow {
  EerCell has;
  std::array<EerCell, kNumEmotions> per_emotion;
  EerCell overall;

  bool operator==(const ReportRow &) const = default;
};

/// Column titles in print order.
inline constexpr std::array<std::string_view, 6> kReportColumns = {
    "HAS", "Neutral", "Happy", "Angry", "Sad", "Overall"};

inline constexpr std::string_view kCellDefinition =
    "per-emotion cells pair that emotion's spoof trials with that emotion's "
    "bonafide trials; HAS pools happy, angry and sad trials before computing "
    "the EER; system rows pair one system's spoof trials with all bonafide "
    "trials";

struct EvalReport {
  /// Every trial.
  ReportRow all;
  /// Keyed by spoof source_system.
  std::map<std::string, ReportRow> per_system;

  bool operator==(const EvalReport &) const = default;
};

/// Cell value by column index into kReportColumns.
const EerCell &CellAt(const ReportRow &row, size_t column);

/// Computes one row from a trial subset.
ReportRow BreakdownRow(std::span<const ScoredTrial> trials);

/// Full report.  EvaluationError on an empty trial set.
EvalReport Breakdown(std::span<const ScoredTrial> trials);

enum class ReportFormat { kJson, kTable };

/// JSON: sorted keys, explicit nulls for absent cells, full precision.
/// Table: fixed width, columns HAS Neutral Happy Angry Sad Overall, EERs
/// with two decimals and "-" for absent cells.
std::string RenderReport(const EvalReport &report, ReportFormat format);

/// Inverse of the JSON rendering.  FormatError on a malformed document.
EvalReport ParseReportJson(std::string_view json_text);

}  // namespace gem

#endif  // GEM_METRICS_EVAL_REPORT_H_
