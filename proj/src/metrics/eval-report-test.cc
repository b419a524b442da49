// metrics/eval-report-test.cc

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

#include <cstdlib>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracles.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/rng.h"
#include "base/text-utils.h"
#include "metrics/eval-report.h"

namespace gem {

namespace {

ScoredTrial T(const std::string &id, double score, Label l, Emotion e,
              const std::string &sys) {
  return {id, score, l, e, sys};
}

// Small hand-built set: two spoof systems, sad has no spoof trials, scores
// on a coarse grid so the golden numbers are easy to check by hand.
std::vector<ScoredTrial> GoldenFixture() {
  std::vector<ScoredTrial> t;
  const Label B = Label::kBonafide, S = Label::kSpoof;
  t.push_back(T("n1", 0.9, B, Emotion::kNeutral, "bonafide"));
  t.push_back(T("n2", 0.6, B, Emotion::kNeutral, "bonafide"));
  t.push_back(T("n3", 0.4, S, Emotion::kNeutral, "f5tts"));
  t.push_back(T("n4", 0.7, S, Emotion::kNeutral, "styletts2"));
  t.push_back(T("h1", 0.8, B, Emotion::kHappy, "bonafide"));
  t.push_back(T("h2", 0.3, B, Emotion::kHappy, "bonafide"));
  t.push_back(T("h3", 0.5, S, Emotion::kHappy, "f5tts"));
  t.push_back(T("h4", 0.2, S, Emotion::kHappy, "styletts2"));
  t.push_back(T("a1", 0.75, B, Emotion::kAngry, "bonafide"));
  t.push_back(T("a2", 0.35, S, Emotion::kAngry, "f5tts"));
  t.push_back(T("a3", 0.85, S, Emotion::kAngry, "styletts2"));
  t.push_back(T("s1", 0.65, B, Emotion::kSad, "bonafide"));
  t.push_back(T("s2", 0.55, B, Emotion::kSad, "bonafide"));
  return t;
}

std::optional<double> OracleCell(const std::vector<ScoredTrial> &trials,
                                 const std::set<Emotion> &emotions,
                                 const std::string &system) {
  std::vector<double> b, s;
  for (const auto &t : trials) {
    if (!emotions.count(t.emotion)) continue;
    if (t.label == Label::kBonafide) b.push_back(t.score);
    else if (system.empty() || t.source_system == system) s.push_back(t.score);
  }
  if (b.empty() || s.empty()) return std::nullopt;
  return testing::OracleEer(b, s);
}

void CheckAgainstOracle(const std::vector<ScoredTrial> &trials, const ReportRow &row,
                        const std::string &system) {
  auto check = [&](const EerCell &cell, std::set<Emotion> emotions) {
    auto ref = OracleCell(trials, emotions, system);
    REQUIRE(cell.eer.has_value() == ref.has_value());
    if (ref) CHECK(std::abs(*cell.eer - *ref) < 1e-12);
  };
  check(row.has, {Emotion::kHappy, Emotion::kAngry, Emotion::kSad});
  for (Emotion e : kAllEmotions) check(row.per_emotion[Index(e)], {e});
  check(row.overall, {kAllEmotions.begin(), kAllEmotions.end()});
}

void CompareGolden(const std::string &name, const std::string &actual) {
  const std::string path = std::string(GEM_TEST_DATA_DIR) + "/" + name;
  if (std::getenv("GEM_UPDATE_GOLDEN")) WriteFileAtomic(path, actual);
  CHECK(ReadFileToString(path) == actual);
}

}  // namespace

TEST_CASE("column structure") {
  CHECK(kReportColumns.size() == 6);
  CHECK(kReportColumns[0] == "HAS");
  CHECK(kReportColumns[1] == "Neutral");
  CHECK(kReportColumns[2] == "Happy");
  CHECK(kReportColumns[3] == "Angry");
  CHECK(kReportColumns[4] == "Sad");
  CHECK(kReportColumns[5] == "Overall");
}

TEST_CASE("single emotion report") {
  std::vector<ScoredTrial> t = {T("a", 0.9, Label::kBonafide, Emotion::kAngry, "bonafide"),
                                T("b", 0.1, Label::kSpoof, Emotion::kAngry, "x"),
                                T("c", 0.5, Label::kSpoof, Emotion::kAngry, "x")};
  EvalReport r = Breakdown(t);
  CHECK(r.all.per_emotion[Index(Emotion::kAngry)] == r.all.overall);
  CHECK_FALSE(r.all.per_emotion[Index(Emotion::kNeutral)].eer.has_value());
  CHECK_FALSE(r.all.per_emotion[Index(Emotion::kHappy)].eer.has_value());
  CHECK_FALSE(r.all.per_emotion[Index(Emotion::kSad)].eer.has_value());
  CHECK(r.all.has == r.all.overall);
  CHECK(r.per_system.size() == 1);
  CHECK_THROWS_AS(Breakdown(std::vector<ScoredTrial>{}), EvaluationError);
}

TEST_CASE("HAS is pooled, not averaged") {
  // Happy and angry are each separable on their own, but their scales
  // differ, so pooling mixes them.
  std::vector<ScoredTrial> t = {
      T("h1", 0.9, Label::kBonafide, Emotion::kHappy, "bonafide"),
      T("h2", 0.8, Label::kSpoof, Emotion::kHappy, "x"),
      T("a1", 0.3, Label::kBonafide, Emotion::kAngry, "bonafide"),
      T("a2", 0.1, Label::kSpoof, Emotion::kAngry, "x")};
  EvalReport r = Breakdown(t);
  CHECK(*r.all.per_emotion[Index(Emotion::kHappy)].eer == 0.0);
  CHECK(*r.all.per_emotion[Index(Emotion::kAngry)].eer == 0.0);
  REQUIRE(r.all.has.eer.has_value());
  CHECK(*r.all.has.eer > 0.0);
  std::vector<ScoredTrial> has;
  for (const auto &x : t)
    if (x.emotion != Emotion::kNeutral) has.push_back(x);
  CHECK(*r.all.has.eer == Eer(has));
}

TEST_CASE("every cell matches an independent recomputation") {
  Rng rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ScoredTrial> t;
    const char *systems[] = {"s1", "s2", "s3"};
    size_t n = 10 + rng.UniformInt(300);
    for (size_t i = 0; i < n; ++i) {
      Emotion e = static_cast<Emotion>(rng.UniformInt(4));
      bool bona = rng.UniformInt(2) == 0;
      std::string sys = bona ? "bonafide" : systems[rng.UniformInt(3)];
      double score = rng.Gaussian(bona ? 1.0 + 0.3 * Index(e) : 0.0, 1.0);
      t.push_back(T("u" + std::to_string(i), score,
                    bona ? Label::kBonafide : Label::kSpoof, e, sys));
    }
    bool any_bona = false, any_spoof = false;
    for (const auto &x : t) (x.label == Label::kBonafide ? any_bona : any_spoof) = true;
    if (!any_bona || !any_spoof) continue;
    EvalReport r = Breakdown(t);
    CheckAgainstOracle(t, r.all, "");
    for (const auto &[sys, row] : r.per_system) {
      CheckAgainstOracle(t, row, sys);
      CHECK(row.overall.n_bonafide == r.all.overall.n_bonafide);
    }
    // Trial order does not matter.
    std::vector<ScoredTrial> rev(t.rbegin(), t.rend());
    CHECK(Breakdown(rev) == r);
    for (const auto *row : {&r.all}) {
      for (size_t c = 0; c < kReportColumns.size(); ++c) {
        const EerCell &cell = CellAt(*row, c);
        if (cell.eer) {
          CHECK(*cell.eer >= 0.0);
          CHECK(*cell.eer <= 100.0);
        }
      }
    }
  }
}

TEST_CASE("golden report") {
  std::vector<ScoredTrial> t = GoldenFixture();
  EvalReport r = Breakdown(t);
  CheckAgainstOracle(t, r.all, "");
  CHECK_FALSE(r.all.per_emotion[Index(Emotion::kSad)].eer.has_value());
  CHECK(r.all.per_emotion[Index(Emotion::kSad)].n_bonafide == 2);
  const std::string json = RenderReport(r, ReportFormat::kJson);
  CHECK(json.find("\"eer\": null") != std::string::npos);
  CompareGolden("report-golden.json", json);
  CompareGolden("report-golden.txt", RenderReport(r, ReportFormat::kTable));
  CHECK(ParseReportJson(json) == r);
  CHECK_THROWS_AS(ParseReportJson("{\"overall\": 3}"), FormatError);
}

}  // namespace gem
