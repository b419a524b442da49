// metrics/eval-report.cc

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

#include "metrics/eval-report.h"

#include <cstdio>
#include <set>
#include <vector>

#include "base/gem-common.h"
#include "json.hpp"

namespace gem {

using internal::StrCat;
using nlohmann::json;

namespace {

EerCell MakeCell(std::span<const ScoredTrial> trials,
                 bool (*keep)(const ScoredTrial &, int), int arg) {
  std::vector<double> bona, spoof;
  for (const ScoredTrial &t : trials) {
    if (!keep(t, arg)) continue;
    (t.label == Label::kBonafide ? bona : spoof).push_back(t.score);
  }
  EerCell cell;
  cell.n_bonafide = bona.size();
  cell.n_spoof = spoof.size();
  if (!bona.empty() && !spoof.empty()) cell.eer = ComputeEer(bona, spoof).eer;
  return cell;
}

json CellToJson(const EerCell &cell) {
  json j;
  j["eer"] = cell.eer ? json(*cell.eer) : json(nullptr);
  j["n_bonafide"] = cell.n_bonafide;
  j["n_spoof"] = cell.n_spoof;
  return j;
}

json RowToJson(const ReportRow &row) {
  json j = json::object();
  for (size_t c = 0; c < kReportColumns.size(); ++c)
    j[std::string(kReportColumns[c])] = CellToJson(CellAt(row, c));
  return j;
}

EerCell CellFromJson(const json &j) {
  EerCell cell;
  if (!j.is_object()) throw FormatError("report cell is not an object");
  const json &e = j.at("eer");
  if (!e.is_null()) cell.eer = e.get<double>();
  cell.n_bonafide = j.at("n_bonafide").get<size_t>();
  cell.n_spoof = j.at("n_spoof").get<size_t>();
  return cell;
}

ReportRow RowFromJson(const json &j) {
  ReportRow row;
  for (size_t c = 0; c < kReportColumns.size(); ++c) {
    EerCell cell = CellFromJson(j.at(std::string(kReportColumns[c])));
    if (c == 0) row.has = cell;
    else if (c == kReportColumns.size() - 1) row.overall = cell;
    else row.per_emotion[c - 1] = cell;
  }
  return row;
}

std::string TableLine(const std::string &name, const ReportRow &row) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%-14s", name.c_str());
  std::string line = buf;
  for (size_t c = 0; c < kReportColumns.size(); ++c) {
    const EerCell &cell = CellAt(row, c);
    if (cell.eer) std::snprintf(buf, sizeof(buf), "%9.2f", *cell.eer);
    else std::snprintf(buf, sizeof(buf), "%9s", "-");
    line += buf;
  }
  return line + "\n";
}

}  // namespace

const EerCell &CellAt(const ReportRow &row, size_t column) {
  if (column == 0) return row.has;
  if (column == kReportColumns.size() - 1) return row.overall;
  return row.per_emotion.at(column - 1);
}

ReportRow BreakdownRow(std::span<const ScoredTrial> trials) {
  ReportRow row;
  row.has = MakeCell(
      trials,
      [](const ScoredTrial &t, int) { return t.emotion != Emotion::kNeutral; },
      0);
  for (Emotion e : kAllEmotions)
    row.per_emotion[Index(e)] = MakeCell(
        trials,
        [](const ScoredTrial &t, int k) { return Index(t.emotion) == k; },
        Index(e));
  row.overall = MakeCell(trials, [](const ScoredTrial &, int) { return true; }, 0);
  return row;
}

EvalReport Breakdown(std::span<const ScoredTrial> trials) {
  if (trials.empty()) throw EvaluationError("no trials to evaluate");
  EvalReport report;
  report.all = BreakdownRow(trials);
  std::set<std::string> systems;
  for (const ScoredTrial &t : trials)
    if (t.label == Label::kSpoof) systems.insert(t.source_system);
  for (const std::string &sys : systems) {
    std::vector<ScoredTrial> subset;
    for (const ScoredTrial &t : trials)
      if (t.label == Label::kBonafide || t.source_system == sys)
        subset.push_back(t);
    report.per_system[sys] = BreakdownRow(subset);
  }
  return report;
}

std::string RenderReport(const EvalReport &report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    json j;
    j["cell_definition"] = std::string(kCellDefinition);
    j["columns"] = json::array();
    for (auto c : kReportColumns) j["columns"].push_back(std::string(c));
    j["overall"] = RowToJson(report.all);
    j["systems"] = json::object();
    for (const auto &[sys, row] : report.per_system) j["systems"][sys] = RowToJson(row);
    return j.dump(2) + "\n";
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%-14s", "EER (%)");
  std::string out = buf;
  for (auto c : kReportColumns) {
    std::snprintf(buf, sizeof(buf), "%9s", std::string(c).c_str());
    out += buf;
  }
  out += "\n";
  out += TableLine("all", report.all);
  for (const auto &[sys, row] : report.per_system) out += TableLine(sys, row);
  return out;
}

EvalReport ParseReportJson(std::string_view text) {
  try {
    json j = json::parse(text);
    EvalReport report;
    report.all = RowFromJson(j.at("overall"));
    for (const auto &[sys, row] : j.at("systems").items())
      report.per_system[sys] = RowFromJson(row);
    return report;
  } catch (const json::exception &e) {
    throw FormatError(StrCat("malformed report JSON: ", e.what()));
  }
}

}  // namespace gem
