// tests/cli-test.cc

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

#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fixtures.h"
#include "pipeline.h"
#include "test-util.h"

#include "base/text-utils.h"
#include "ensemble/gated-ensemble.h"
#include "manifest/manifest.h"

namespace gem {

namespace fs = std::filesystem;
using testing::CliRun;
using testing::Gem;

namespace {

bool Contains(const std::string &haystack, const std::string &needle) {
  return haystack.find(needle) != std::string::npos;
}

std::vector<std::string> FuseFromScores(const std::string &dir) {
  return {"--out", dir, "fuse", "--manifest", dir + "/manifest.csv",
          "--expert-scores", "neutral=" + dir + "/model-n.scores.tsv",
          "--expert-scores", "happy=" + dir + "/model-h.scores.tsv",
          "--expert-scores", "angry=" + dir + "/model-a.scores.tsv",
          "--expert-scores", "sad=" + dir + "/model-s.scores.tsv",
          "--logits", dir + "/logits.tsv"};
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(Gem({}).status == 2);
  CHECK(Gem({"no-such-command"}).status == 2);
  CliRun v = Gem({"--version"});
  CHECK(v.status == 0);
  CHECK(Contains(v.out, kGemVersion));
  CHECK(Gem({"simulate", "--mode", "scores"}).status == 2);  // no --out

  testing::TempDir dir;
  WriteFileAtomic(dir / "bad.conf", "sim.trials_per_cel = 5\n");
  CliRun bad = Gem({"--config", (dir / "bad.conf").string(), "--out",
                    dir.path().string(), "simulate"});
  CHECK(bad.status == 2);
  CHECK(Contains(bad.err, "trials_per_cel"));

  CliRun missing = Gem({"--out", dir.path().string(), "eval", "--manifest",
                        (dir / "nowhere.csv").string(), "--scores",
                        "x=" + (dir / "x.tsv").string()});
  CHECK(missing.status == 2);
  CHECK(Contains(missing.err, "nowhere.csv"));
}

TEST_CASE("simulate, fuse and eval on score files") {
  testing::TempDir dir;
  const std::string d = dir.path().string();
  WriteFileAtomic(dir / "sim.conf",
                  "sim.trials_per_cell = 300\nsim.gate_logit_gap = 20\n");
  const std::vector<std::string> common = {"--config", d + "/sim.conf", "--seed", "11"};
  auto with_common = [&](std::vector<std::string> args) {
    args.insert(args.begin(), common.begin(), common.end());
    return Gem(args);
  };
  REQUIRE(with_common({"--out", d, "simulate", "--mode", "scores"}).status == 0);
  for (const char *f : {"manifest.csv", "logits.tsv", "model-n.scores.tsv",
                        "model-h.scores.tsv", "model-a.scores.tsv",
                        "model-s.scores.tsv", "run-simulate.json"})
    CHECK(fs::exists(dir / f));

  CliRun fuse = with_common(FuseFromScores(d));
  REQUIRE_MESSAGE(fuse.status == 0, fuse.err);
  CHECK(fs::exists(dir / "gem.fusion.tsv"));
  CHECK(fs::exists(dir / "gem.scores.tsv"));
  std::vector<std::string> hard = FuseFromScores(d);
  hard.push_back("--hard");
  hard.push_back("--threshold");
  hard.push_back("0.5");
  REQUIRE(with_common(hard).status == 0);
  CHECK(fs::exists(dir / "hard-gate.fusion.tsv"));
  CHECK(fs::exists(dir / "hard-gate.decisions.tsv"));

  // The fusion table carries the per-trial weights and scores.
  std::vector<FusionResult> rows = ReadFusionResults(dir / "gem.fusion.tsv");
  CHECK(rows.size() == 8 * 300);
  for (const FusionResult &r : rows) {
    double lo = 1e300, hi = -1e300;
    for (double s : r.scores) lo = std::min(lo, s), hi = std::max(hi, s);
    CHECK(r.fused >= lo);
    CHECK(r.fused <= hi);
  }

  std::vector<std::string> eval = {"--out", d + "/eval", "eval", "--manifest",
                                   d + "/manifest.csv"};
  for (const char *m : {"model-n", "model-h", "model-a", "model-s"}) {
    eval.push_back("--scores");
    eval.push_back(std::string(m) + "=" + d + "/" + m + ".scores.tsv");
  }
  eval.push_back("--scores");
  eval.push_back("gem=" + d + "/gem.fusion.tsv");
  eval.push_back("--scores");
  eval.push_back("hard=" + d + "/hard-gate.scores.tsv");
  CliRun ev = with_common(eval);
  REQUIRE_MESSAGE(ev.status == 0, ev.err);
  CHECK(Contains(ev.out, "HAS"));
  auto reports = testing::ReadEvalReports(dir / "eval" / "report.json");
  REQUIRE(reports.size() == 6);
  const double gem = *reports.at("gem").all.overall.eer;
  for (const char *m : {"model-n", "model-h", "model-a", "model-s"})
    CHECK(gem <= *reports.at(m).all.overall.eer + 0.5);
  CHECK(std::abs(*reports.at("hard").all.overall.eer - gem) < 0.5);

  CliRun table = Gem({"report", "--input", d + "/eval/report.json"});
  CHECK(table.status == 0);
  CHECK(table.out == ReadFileToString(dir / "eval" / "report.txt"));
  CliRun js = Gem({"report", "--input", d + "/eval/report.json", "--format", "json",
                   "--output", d + "/again.json"});
  CHECK(js.status == 0);
  CHECK(ReadFileToString(dir / "again.json") ==
        ReadFileToString(dir / "eval" / "report.json"));
  CHECK(Gem({"report", "--input", d + "/eval/report.json", "--format", "xml"}).status ==
        2);

  // A missing expert score file is reported by path, before any output.
  fs::remove(dir / "model-a.scores.tsv");
  std::vector<std::string> again = FuseFromScores(d);
  again[1] = d + "/second";
  CliRun miss = with_common(again);
  CHECK(miss.status == 2);
  CHECK(Contains(miss.err, "model-a.scores.tsv"));
  CHECK_FALSE(fs::exists(dir / "second" / "gem.fusion.tsv"));
}

TEST_CASE("build-manifest and split") {
  testing::TempDir dir;
  const std::string d = dir.path().string();
  WriteManifest(testing::FullLayoutManifest(), dir / "full.csv");
  CliRun bm = Gem({"--out", d + "/m", "build-manifest", "--input", d + "/full.csv"});
  REQUIRE_MESSAGE(bm.status == 0, bm.err);
  CHECK(LoadManifest(dir / "m" / "manifest.csv").size() == 48000);

  SplitSpec spec = testing::PaperSplitSpec();
  auto join = [](const std::set<std::string> &s) {
    std::string out;
    for (const auto &x : s) out += (out.empty() ? "" : ",") + x;
    return out;
  };
  WriteFileAtomic(dir / "split.conf",
                  "split.train_speakers = " + join(spec.train_speakers) +
                      "\nsplit.valid_speakers = " + join(spec.valid_speakers) +
                      "\nsplit.test_speakers = " + join(spec.test_speakers) +
                      "\nsplit.train_system = cosyvoice\nsplit.valid_system = f5tts"
                      "\nsplit.test_system = styletts2\n");
  CliRun sp = Gem({"--config", d + "/split.conf", "--out", d + "/s", "split",
                   "--manifest", d + "/m/manifest.csv"});
  REQUIRE_MESSAGE(sp.status == 0, sp.err);
  CHECK(LoadManifest(dir / "s" / "train.csv").size() == 9600);
  CHECK(LoadManifest(dir / "s" / "valid.csv").size() == 4800);
  CHECK(LoadManifest(dir / "s" / "test.csv").size() == 9600);

  // Label and system disagreeing is a validation failure with exit code 2.
  WriteFileAtomic(dir / "broken.csv", std::string(kManifestHeader) +
                                          "\nu1,s1,happy,spoof,bonafide,,\n");
  CliRun broken = Gem({"--out", d + "/b", "build-manifest", "--input", d + "/broken.csv"});
  CHECK(broken.status == 2);
  CHECK(Contains(broken.err, "broken.csv"));
}

TEST_CASE("audio pipeline end to end") {
  testing::TempDir dir;
  testing::PipelineOutcome first = testing::RunCorpusPipeline(dir.path(), "7");
  REQUIRE_MESSAGE(first.ok, first.failure);
  CHECK(first.gem_overall <= first.generalist_overall + 1.0);
  auto before = testing::SnapshotTree(dir.path());
  CHECK(before.count("models/run-train-expert.json") == 1);
  CHECK(before.count("models/model-s.model") == 1);

  testing::PipelineOutcome second = testing::RunCorpusPipeline(dir.path(), "7");
  REQUIRE(second.ok);
  CHECK(testing::SnapshotTree(dir.path()) == before);

  // The same pipeline with more worker threads gives the same bytes.
  testing::TempDir other;
  WriteFileAtomic(other / "gem.conf", testing::kPipelineConfig);
  const std::string o = other.path().string();
  CliRun a = Gem({"--config", o + "/gem.conf", "--seed", "7", "--jobs", "3", "--out",
                  o + "/corpus", "simulate", "--mode", "corpus"});
  REQUIRE(a.status == 0);
  for (const auto &[rel, body] : testing::SnapshotTree(other / "corpus"))
    CHECK(before.at("corpus/" + rel) == body);
}

}  // namespace gem
