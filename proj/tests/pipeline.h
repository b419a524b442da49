// tests/pipeline.h

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

#ifndef GEM_TESTS_PIPELINE_H_
#define GEM_TESTS_PIPELINE_H_

// Drives the command-line front end in-process for integration tests.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.h"
#include "json.hpp"
#include "manifest/manifest.h"
#include "metrics/eval-report.h"

namespace gem {
namespace testing {

struct CliRun {
  int status = 0;
  std::string out;
  std::string err;
};

inline CliRun Gem(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  CliRun run;
  run.status = RunCli(args, out, err);
  run.out = out.str();
  run.err = err.str();
  return run;
}

/// Reports of every model in an eval output directory.
inline std::map<std::string, EvalReport> ReadEvalReports(
    const std::filesystem::path &report_json) {
  std::ifstream in(report_json);
  nlohmann::json j = nlohmann::json::parse(in);
  std::map<std::string, EvalReport> reports;
  for (const auto &[name, body] : j.at("models").items())
    reports[name] = ParseReportJson(body.dump());
  return reports;
}

/// Writes the trials of `speakers` to `path`, with audio paths rebased
/// from the corpus directory to the directory of `path`.
inline void WriteSpeakerSubset(const Manifest &corpus,
                               const std::filesystem::path &corpus_dir,
                               const std::set<std::string> &speakers,
                               const std::filesystem::path &path) {
  std::vector<TrialRecord> keep;
  for (const TrialRecord &r : corpus) {
    if (!speakers.count(r.speaker_id)) continue;
    TrialRecord copy = r;
    copy.audio_path =
        std::filesystem::relative(corpus_dir / r.audio_path, path.parent_path())
            .generic_string();
    keep.push_back(std::move(copy));
  }
  WriteManifest(Manifest(std::move(keep)), path);
}

struct PipelineOutcome {
  bool ok = true;
  /// First failing step with its stderr, when !ok.
  std::string failure;
  double generalist_overall = 0.0;
  double gem_overall = 0.0;
};

inline const char *kPipelineConfig =
    "# 50 one-second utterances per (emotion, label) cell, four speakers\n"
    "sim.corpus.utterances_per_cell = 50\n"
    "sim.corpus.speakers = 4\n"
    "sim.corpus.artifact = 0.01\n"
    "sim.corpus.noise = 0.02\n"
    "train.lr = 0.05\n"
    "specialize.lr = 0.02\n";

/// simulate corpus -> extract-features -> train-expert -> specialize x4 ->
/// train-gate -> score -> fuse -> eval, all under `root`.  Speakers spk01
/// and spk02 train, spk03 and spk04 are held out for evaluation.
inline PipelineOutcome RunCorpusPipeline(const std::filesystem::path &root,
                                         const std::string &seed) {
  namespace fs = std::filesystem;
  PipelineOutcome result;
  fs::create_directories(root);
  {
    std::ofstream conf(root / "gem.conf");
    conf << kPipelineConfig;
  }
  const std::string s = root.string();
  auto step = [&](std::vector<std::string> args) {
    if (!result.ok) return;
    std::vector<std::string> full = {"--config", s + "/gem.conf", "--seed", seed};
    full.insert(full.end(), args.begin(), args.end());
    CliRun run = Gem(full);
    if (run.status != 0) {
      result.ok = false;
      result.failure = args[2] + ": " + run.err;
    }
  };
  step({"--out", s + "/corpus", "simulate", "--mode", "corpus"});
  if (!result.ok) return result;
  Manifest corpus = LoadManifest(root / "corpus" / "manifest.csv");
  WriteSpeakerSubset(corpus, root / "corpus", {"spk01", "spk02"}, root / "train.csv");
  WriteSpeakerSubset(corpus, root / "corpus", {"spk03", "spk04"}, root / "test.csv");

  const std::string feats = s + "/feats/features.tsv";
  step({"--out", s + "/feats", "extract-features", "--manifest",
        s + "/corpus/manifest.csv", "--fit-manifest", s + "/train.csv"});
  step({"--out", s + "/models", "train-expert", "--manifest", s + "/train.csv",
        "--features", feats});
  for (const char *e : {"neutral", "happy", "angry", "sad"})
    step({"--out", s + "/models", "specialize", "--base",
          s + "/models/generalist.model", "--emotion", e, "--manifest",
          s + "/train.csv", "--features", feats});
  step({"--out", s + "/models", "train-gate", "--manifest", s + "/train.csv",
        "--features", feats});
  step({"--out", s + "/scores", "score", "--manifest", s + "/test.csv",
        "--features", feats, "--model", s + "/models/generalist.model"});
  step({"--out", s + "/scores", "fuse", "--manifest", s + "/test.csv",
        "--features", feats,
        "--expert-model", "neutral=" + s + "/models/model-n.model",
        "--expert-model", "happy=" + s + "/models/model-h.model",
        "--expert-model", "angry=" + s + "/models/model-a.model",
        "--expert-model", "sad=" + s + "/models/model-s.model",
        "--gate", s + "/models/gate.model"});
  step({"--out", s + "/eval", "eval", "--manifest", s + "/test.csv", "--scores",
        "generalist=" + s + "/scores/generalist.scores.tsv", "--scores",
        "gem=" + s + "/scores/gem.fusion.tsv"});
  if (!result.ok) return result;
  auto reports = ReadEvalReports(root / "eval" / "report.json");
  result.generalist_overall = reports.at("generalist").all.overall.eer.value();
  result.gem_overall = reports.at("gem").all.overall.eer.value();
  return result;
}

/// Relative path -> contents for every regular file under `dir`.
inline std::map<std::string, std::string> SnapshotTree(
    const std::filesystem::path &dir) {
  std::map<std::string, std::string> files;
  for (const auto &entry : std::filesystem::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream body;
    body << in.rdbuf();
    files[std::filesystem::relative(entry.path(), dir).generic_string()] = body.str();
  }
  return files;
}

}  // namespace testing
}  // namespace gem

#endif  // GEM_TESTS_PIPELINE_H_
