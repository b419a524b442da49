// cli/cli.cc

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

#include "cli/cli.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "base/emotion.h"
#include "base/gem-common.h"
#include "base/kv-config.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "base/text-utils.h"
#include "ensemble/gated-ensemble.h"
#include "expert/linear-expert.h"
#include "features/feature-extractor.h"
#include "features/wave-io.h"
#include "gating/emotion-gate.h"
#include "manifest/manifest.h"
#include "metrics/eer.h"
#include "metrics/eval-report.h"
#include "simulator/simulator.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;
using nlohmann::json;

namespace {

// Keys accepted in a config file, shared by every subcommand so one file
// can drive a whole experiment.
std::vector<std::string> KnownConfigKeys() {
  std::vector<std::string> keys = {
      "seed", "jobs", "out", "manifest", "features", "temperature",
      "threshold", "features.normalize"};
  for (const char *k : {"frame_len_ms", "hop_ms", "fft_size", "n_bands",
                        "floor_eps"})
    keys.push_back(StrCat("features.", k));
  for (const char *stage : {"train.", "specialize.", "gate."})
    for (const char *k : {"lr", "batch_size", "epochs", "l2"})
      keys.push_back(StrCat(stage, k));
  for (const char *k : {"train_speakers", "valid_speakers", "test_speakers",
                        "train_system", "valid_system", "test_system"})
    keys.push_back(StrCat("split.", k));
  for (std::string &k : SimConfig::KnownKeys("sim.")) keys.push_back(std::move(k));
  return keys;
}

// Flags shared by all subcommands.
struct CommonFlags {
  std::string config;
  std::optional<int> jobs;
  std::string out;
  std::optional<std::uint64_t> seed;
};

class RunContext {
 public:
  RunContext(std::string command, const CommonFlags &flags, std::ostream &out)
      : command_(std::move(command)), out_(out) {
    if (!flags.config.empty()) {
      if (!fs::exists(flags.config))
        throw ValidationError(StrCat("config file not found: ", flags.config));
      config_ = KeyValueConfig::ReadFile(flags.config);
    }
    config_.CheckKnownKeys(KnownConfigKeys());
    if (flags.seed) config_.Set("seed", std::to_string(*flags.seed));
    seed_ = config_.GetUint("seed", 0);
    jobs_ = flags.jobs ? *flags.jobs : static_cast<int>(config_.GetInt("jobs", 1));
    if (jobs_ < 1) throw ValidationError(StrCat("--jobs must be >= 1, got ", jobs_));
    if (!flags.out.empty()) out_dir_ = flags.out;
    else if (config_.Has("out")) out_dir_ = config_.ResolvePath(*config_.Get("out"));
  }

  const KeyValueConfig &config() const { return config_; }
  std::uint64_t seed() const { return seed_; }
  int jobs() const { return jobs_; }
  std::ostream &out() { return out_; }

  std::uint64_t StageSeed(const std::string &stage) const {
    return DeriveSeed(seed_, stage);
  }

  const fs::path &OutDir() const {
    if (out_dir_.empty())
      throw ValidationError(StrCat(command_, ": --out is required"));
    return out_dir_;
  }

  // An input file from a flag, falling back to a config key.  Missing
  // files are validation errors so nothing is read before all inputs are
  // known to exist.
  fs::path Input(const std::string &flag_value, const std::string &key,
                 const std::string &flag_name) const {
    fs::path p;
    if (!flag_value.empty()) p = flag_value;
    else if (!key.empty() && config_.Has(key)) p = config_.ResolvePath(*config_.Get(key));
    else throw ValidationError(StrCat(command_, ": ", flag_name, " is required"));
    return Existing(p, flag_name);
  }

  fs::path Existing(const fs::path &p, const std::string &what) const {
    if (!fs::exists(p))
      throw ValidationError(StrCat(command_, ": ", what, " not found: ", p.string()));
    return p;
  }

  // Records what produced the outputs.  No timestamps, no --jobs, so
  // reruns produce identical logs.
  void WriteRunLog(const std::string &name, const std::vector<std::string> &outputs,
                   json extra = json::object()) const {
    json log;
    log["command"] = command_;
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(Fnv1a64(config_.Canonical())));
    log["config_hash"] = hash;
    log["seed"] = seed_;
    log["version"] = kGemVersion;
    log["outputs"] = outputs;
    if (!extra.empty()) log["details"] = std::move(extra);
    WriteFileAtomic(OutDir() / StrCat("run-", name, ".json"), log.dump(2) + "\n");
  }

 private:
  std::string command_;
  std::ostream &out_;
  KeyValueConfig config_;
  std::uint64_t seed_ = 0;
  int jobs_ = 1;
  fs::path out_dir_;
};

// "happy", "h" or "model-h".
Emotion ParseEmotionArg(const std::string &arg) {
  std::string s = ToLower(Trim(arg));
  if (s.rfind("model-", 0) == 0) s = s.substr(6);
  if (s.size() == 1)
    for (Emotion e : kAllEmotions)
      if (EmotionName(e)[0] == s[0]) return e;
  if (auto e = ParseEmotion(s)) return *e;
  throw ValidationError(StrCat("unknown emotion '", arg, "'"));
}

std::pair<std::string, std::string> SplitAssignment(const std::string &arg,
                                                    const std::string &flag) {
  size_t eq = arg.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size())
    throw ValidationError(StrCat(flag, " expects NAME=PATH, got '", arg, "'"));
  return {arg.substr(0, eq), arg.substr(eq + 1)};
}

// Audio paths in a manifest are relative to the manifest's directory.
fs::path AudioPath(const fs::path &manifest_path, const TrialRecord &r) {
  fs::path p(r.audio_path);
  if (p.is_absolute()) return p;
  return manifest_path.parent_path() / p;
}

// Rewrites relative audio paths so they stay valid from `to_dir`.
Manifest Rebase(const Manifest &m, const fs::path &manifest_path,
                const fs::path &to_dir) {
  std::vector<TrialRecord> records;
  records.reserve(m.size());
  const fs::path target = fs::weakly_canonical(fs::absolute(to_dir));
  for (TrialRecord r : m) {
    if (!r.audio_path.empty() && fs::path(r.audio_path).is_relative()) {
      fs::path abs = fs::weakly_canonical(fs::absolute(AudioPath(manifest_path, r)));
      r.audio_path = abs.lexically_relative(target).generic_string();
    }
    records.push_back(std::move(r));
  }
  return Manifest(std::move(records), m.provenance());
}

TrainingSet JoinFeatures(const Manifest &m, const FeatureTable &table,
                         const fs::path &features_path) {
  TrainingSet data;
  data.reserve(m.size());
  for (const TrialRecord &r : m) {
    const FeatureVector *x = table.Find(r.utt_id);
    if (x == nullptr)
      throw ValidationError(StrCat("no features for ", r.utt_id, " in ",
                                   features_path.string()));
    data.push_back({*x, r.label, r.emotion});
  }
  return data;
}

double FinalLoss(const LinearExpert &expert, const TrainingSet &data, double l2) {
  return ExpertLossAndGradient(expert, data, l2).loss;
}

// ---------------------------------------------------------------------------

struct BuildManifestArgs {
  std::string input, wav_root;
};

// Layout under --wav-root: <source_system>/<speaker>/<emotion>/<utt>.wav,
// with source_system "bonafide" for genuine speech.
int CmdBuildManifest(RunContext &ctx, const BuildManifestArgs &a) {
  if (a.input.empty() == a.wav_root.empty())
    throw ValidationError("build-manifest: give exactly one of --input, --wav-root");
  const fs::path out_dir = ctx.OutDir();
  const fs::path out_path = out_dir / "manifest.csv";
  Manifest manifest;
  if (!a.input.empty()) {
    fs::path in = ctx.Existing(a.input, "--input");
    manifest = Rebase(LoadManifest(in), in, out_dir);
  } else {
    fs::path root = ctx.Existing(a.wav_root, "--wav-root");
    std::vector<fs::path> files;
    for (const auto &entry : fs::recursive_directory_iterator(root))
      if (entry.is_regular_file() && ToLower(entry.path().extension().string()) == ".wav")
        files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::vector<TrialRecord> records(files.size());
    ParallelFor(files.size(), ctx.jobs(), [&](size_t i) {
      fs::path rel = files[i].lexically_relative(root);
      std::vector<std::string> parts;
      for (const auto &p : rel) parts.push_back(p.string());
      if (parts.size() != 4)
        throw ValidationError(StrCat(files[i].string(),
                                     ": expected <system>/<speaker>/<emotion>/<utt>.wav"));
      TrialRecord r;
      r.source_system = ToLower(parts[0]);
      r.speaker_id = parts[1];
      auto emotion = ParseEmotion(parts[2]);
      if (!emotion)
        throw ValidationError(StrCat(files[i].string(), ": unknown emotion directory '",
                                     parts[2], "'"));
      r.emotion = *emotion;
      r.label = r.source_system == kBonafideSystem ? Label::kBonafide : Label::kSpoof;
      r.utt_id = files[i].stem().string();
      r.audio_path = fs::weakly_canonical(fs::absolute(files[i]))
                         .lexically_relative(fs::weakly_canonical(fs::absolute(out_dir)))
                         .generic_string();
      r.duration_s = ReadWav(files[i]).DurationSeconds();
      records[i] = std::move(r);
    });
    manifest = Manifest(std::move(records), root.string());
  }
  WriteManifest(manifest, out_path);
  ctx.WriteRunLog("build-manifest", {"manifest.csv"});
  ctx.out() << "wrote " << manifest.size() << " trials to " << out_path.string() << "\n";
  return 0;
}

struct SplitArgs {
  std::string manifest, split_spec;
};

int CmdSplit(RunContext &ctx, const SplitArgs &a) {
  fs::path in = ctx.Input(a.manifest, "manifest", "--manifest");
  SplitSpec spec = a.split_spec.empty()
                       ? SplitSpecFromConfig(ctx.config(), "split.")
                       : ReadSplitSpec(ctx.Existing(a.split_spec, "--split-spec"));
  spec.Validate();
  const fs::path out_dir = ctx.OutDir();
  Splits s = BuildSplits(LoadManifest(in), spec);
  const std::pair<const char *, const Manifest *> parts[] = {
      {"train.csv", &s.train}, {"valid.csv", &s.valid}, {"test.csv", &s.test}};
  for (const auto &[name, m] : parts) {
    WriteManifest(Rebase(*m, in, out_dir), out_dir / name);
    ctx.out() << name << ": " << m->size() << " trials\n";
  }
  ctx.WriteRunLog("split", {"train.csv", "valid.csv", "test.csv"});
  return 0;
}

struct ExtractArgs {
  std::string manifest, fit_manifest;
};

int CmdExtractFeatures(RunContext &ctx, const ExtractArgs &a) {
  fs::path in = ctx.Input(a.manifest, "manifest", "--manifest");
  std::optional<fs::path> fit;
  if (!a.fit_manifest.empty()) fit = ctx.Existing(a.fit_manifest, "--fit-manifest");
  const FeatureConfig fc = FeatureConfig::FromConfig(ctx.config(), "features.");
  const bool normalize = ctx.config().GetBool("features.normalize", true);
  const fs::path out_dir = ctx.OutDir();

  Manifest m = LoadManifest(in);
  for (const TrialRecord &r : m)
    if (r.audio_path.empty())
      throw ValidationError(StrCat("trial ", r.utt_id, " has no audio_path"));
  std::vector<FeatureVector> rows(m.size());
  ParallelFor(m.size(), ctx.jobs(), [&](size_t i) {
    const TrialRecord &r = m.records()[i];
    Waveform wave = ReadWav(AudioPath(in, r));
    fc.Validate(wave.sample_rate);
    rows[i] = Extract(wave, fc);
  });
  FeatureTable table;
  for (size_t i = 0; i < m.size(); ++i) table.Add(m.records()[i].utt_id, std::move(rows[i]));

  std::vector<std::string> outputs = {"features.tsv"};
  if (normalize) {
    std::vector<const FeatureVector *> fit_rows;
    if (fit) {
      for (const TrialRecord &r : LoadManifest(*fit)) {
        const FeatureVector *x = table.Find(r.utt_id);
        if (x == nullptr)
          throw ValidationError(StrCat("--fit-manifest trial ", r.utt_id,
                                       " is not in ", in.string()));
        fit_rows.push_back(x);
      }
    } else {
      for (const FeatureVector &x : table.rows()) fit_rows.push_back(&x);
    }
    FeatureNormalizer norm = FeatureNormalizer::Fit(fit_rows);
    for (FeatureVector &x : table.mutable_rows()) x = norm.Apply(x);
    WriteFileAtomic(out_dir / "normalizer.txt", FormatNormalizer(norm));
    outputs.push_back("normalizer.txt");
  }
  WriteFeatureTable(table, out_dir / "features.tsv");
  ctx.WriteRunLog("extract-features", outputs);
  ctx.out() << "extracted " << table.size() << " x " << fc.Dim() << " features\n";
  return 0;
}

struct TrainArgs {
  std::string manifest, features, base, emotion;
};

int CmdTrainExpert(RunContext &ctx, const TrainArgs &a) {
  fs::path mp = ctx.Input(a.manifest, "manifest", "--manifest");
  fs::path fp = ctx.Input(a.features, "features", "--features");
  TrainConfig tc = TrainConfig::FromConfig(ctx.config(), "train.", TrainConfig::Generalist());
  tc.seed = ctx.StageSeed("train-expert");
  tc.Validate();
  const fs::path out_dir = ctx.OutDir();
  TrainingSet data = JoinFeatures(LoadManifest(mp), ReadFeatureTable(fp), fp);
  LinearExpert expert = TrainGeneralist(data, tc);
  WriteExpert(expert, out_dir / "generalist.model");
  double loss = FinalLoss(expert, data, tc.l2);
  ctx.WriteRunLog("train-expert", {"generalist.model"},
                  {{"trials", data.size()}, {"final_loss", loss}});
  ctx.out() << "generalist: " << data.size() << " trials, loss " << loss << "\n";
  return 0;
}

int CmdSpecialize(RunContext &ctx, const TrainArgs &a) {
  fs::path bp = ctx.Input(a.base, "", "--base");
  fs::path mp = ctx.Input(a.manifest, "manifest", "--manifest");
  fs::path fp = ctx.Input(a.features, "features", "--features");
  if (a.emotion.empty()) throw ValidationError("specialize: --emotion is required");
  const Emotion e = ParseEmotionArg(a.emotion);
  TrainConfig tc =
      TrainConfig::FromConfig(ctx.config(), "specialize.", TrainConfig::Specialist());
  tc.seed = ctx.StageSeed(StrCat("specialize-", EmotionName(e)));
  tc.Validate(/*allow_zero_epochs=*/true);
  const fs::path out_dir = ctx.OutDir();
  LinearExpert base = ReadExpert(bp);
  Manifest subset = Filter(LoadManifest(mp), TrialFilter::ByEmotion(e));
  if (subset.empty())
    throw ValidationError(StrCat("no ", EmotionName(e), " trials in ", mp.string()));
  TrainingSet data = JoinFeatures(subset, ReadFeatureTable(fp), fp);
  LinearExpert expert = Specialize(base, data, tc);
  const std::string file = expert.tag + ".model";
  WriteExpert(expert, out_dir / file);
  double loss = FinalLoss(expert, data, tc.l2);
  ctx.WriteRunLog(StrCat("specialize-", EmotionName(e)), {file},
                  {{"trials", data.size()}, {"final_loss", loss}});
  ctx.out() << expert.tag << ": " << data.size() << " trials, loss " << loss << "\n";
  return 0;
}

int CmdTrainGate(RunContext &ctx, const TrainArgs &a) {
  fs::path mp = ctx.Input(a.manifest, "manifest", "--manifest");
  fs::path fp = ctx.Input(a.features, "features", "--features");
  TrainConfig tc = TrainConfig::FromConfig(ctx.config(), "gate.", GateTrainDefaults());
  tc.seed = ctx.StageSeed("train-gate");
  tc.Validate();
  const fs::path out_dir = ctx.OutDir();
  TrainingSet data = JoinFeatures(LoadManifest(mp), ReadFeatureTable(fp), fp);
  GateModel gate = TrainGate(data, tc);
  WriteGate(gate, out_dir / "gate.model");
  double acc = GateAccuracy(gate, data);
  ctx.WriteRunLog("train-gate", {"gate.model"},
                  {{"trials", data.size()}, {"train_accuracy", acc}});
  ctx.out() << "gate: " << data.size() << " trials, train accuracy " << acc << "\n";
  return 0;
}

struct ScoreArgs {
  std::string manifest, features, model, gate;
};

int CmdScore(RunContext &ctx, const ScoreArgs &a) {
  if (a.model.empty() == a.gate.empty())
    throw ValidationError("score: give exactly one of --model, --gate");
  fs::path mp = ctx.Input(a.manifest, "manifest", "--manifest");
  fs::path fp = ctx.Input(a.features, "features", "--features");
  const bool is_gate = !a.gate.empty();
  fs::path model_path = ctx.Existing(is_gate ? a.gate : a.model, is_gate ? "--gate" : "--model");
  const fs::path out_dir = ctx.OutDir();

  Manifest m = LoadManifest(mp);
  FeatureTable table = ReadFeatureTable(fp);
  std::vector<const FeatureVector *> xs;
  for (const TrialRecord &r : m) {
    const FeatureVector *x = table.Find(r.utt_id);
    if (x == nullptr)
      throw ValidationError(StrCat("no features for ", r.utt_id, " in ", fp.string()));
    xs.push_back(x);
  }
  std::string file;
  if (is_gate) {
    GateModel gate = ReadGate(model_path);
    std::vector<std::pair<std::string, EmotionLogits>> rows(m.size());
    ParallelFor(m.size(), ctx.jobs(), [&](size_t i) {
      rows[i] = {m.records()[i].utt_id, GateLogits(gate, xs[i]->span())};
    });
    file = "logits.tsv";
    WriteLogits(rows, out_dir / file);
  } else {
    LinearExpert expert = ReadExpert(model_path);
    std::vector<std::pair<std::string, double>> rows(m.size());
    ParallelFor(m.size(), ctx.jobs(), [&](size_t i) {
      rows[i] = {m.records()[i].utt_id, Score(expert, xs[i]->span())};
    });
    file = expert.tag + ".scores.tsv";
    WriteScores(rows, out_dir / file);
  }
  ctx.WriteRunLog(StrCat("score-", fs::path(file).stem().stem().string()), {file});
  ctx.out() << "scored " << m.size() << " trials -> " << (out_dir / file).string() << "\n";
  return 0;
}

struct FuseArgs {
  std::string manifest, features, gate, logits, name;
  std::vector<std::string> expert_models, expert_scores;
  std::optional<double> temperature, threshold;
  bool hard = false;
};

int CmdFuse(RunContext &ctx, const FuseArgs &a) {
  fs::path mp = ctx.Input(a.manifest, "manifest", "--manifest");
  if (a.gate.empty() == a.logits.empty())
    throw ValidationError("fuse: give exactly one of --gate, --logits");
  if (a.expert_models.size() + a.expert_scores.size() != kNumEmotions)
    throw ValidationError(StrCat("fuse: need one expert per emotion (4), got ",
                                 a.expert_models.size() + a.expert_scores.size()));
  // Resolve and check every input before reading any of them.
  std::vector<std::pair<Emotion, fs::path>> models, tables;
  for (const auto &arg : a.expert_models) {
    auto [emo, path] = SplitAssignment(arg, "--expert-model");
    models.push_back({ParseEmotionArg(emo), ctx.Existing(path, "expert model")});
  }
  for (const auto &arg : a.expert_scores) {
    auto [emo, path] = SplitAssignment(arg, "--expert-scores");
    tables.push_back({ParseEmotionArg(emo), ctx.Existing(path, "expert score file")});
  }
  const bool gate_model = !a.gate.empty();
  fs::path gp = ctx.Existing(gate_model ? a.gate : a.logits,
                             gate_model ? "--gate" : "--logits");
  const bool need_features = gate_model || !models.empty();
  std::optional<fs::path> fp;
  if (need_features) fp = ctx.Input(a.features, "features", "--features");
  const Temperature t(a.temperature ? *a.temperature
                                    : ctx.config().GetDouble("temperature", 1.5));
  std::optional<double> threshold = a.threshold;
  if (!threshold && ctx.config().Has("threshold"))
    threshold = ctx.config().GetDouble("threshold", 0.0);
  const std::string name = a.name.empty() ? (a.hard ? "hard-gate" : "gem") : a.name;
  const fs::path out_dir = ctx.OutDir();

  ExpertRegistry registry;
  for (const auto &[e, path] : models) registry.Add(e, ReadExpert(path));
  for (const auto &[e, path] : tables) registry.Add(e, LoadScores(path), path.string());
  registry.Validate();
  GateSource gate = gate_model ? GateSource(ReadGate(gp)) : GateSource(LoadLogits(gp));

  Manifest m = LoadManifest(mp);
  FeatureTable table;
  if (fp) table = ReadFeatureTable(*fp);
  std::vector<FusionResult> results(m.size());
  ParallelFor(m.size(), ctx.jobs(), [&](size_t i) {
    const std::string &id = m.records()[i].utt_id;
    std::span<const double> x;
    if (fp) {
      const FeatureVector *row = table.Find(id);
      if (row == nullptr)
        throw ValidationError(StrCat("no features for ", id, " in ", fp->string()));
      x = row->span();
    }
    results[i] = a.hard ? HardGateScore(id, x, registry, gate)
                        : GemScore(id, x, registry, gate, t);
    if (threshold) results[i].decision = Decide(results[i].fused, *threshold);
  });

  std::vector<std::string> outputs = {name + ".fusion.tsv", name + ".scores.tsv"};
  WriteFusionResults(results, out_dir / outputs[0]);
  std::vector<std::pair<std::string, double>> scores;
  for (const FusionResult &r : results) scores.push_back({r.utt_id, r.fused});
  WriteScores(scores, out_dir / outputs[1]);
  if (threshold) {
    std::string text;
    for (const FusionResult &r : results)
      text += r.utt_id + "\t" + std::to_string(static_cast<int>(*r.decision)) + "\n";
    outputs.push_back(name + ".decisions.tsv");
    WriteFileAtomic(out_dir / outputs.back(), text);
  }
  json details = {{"trials", results.size()}, {"hard_gate", a.hard}};
  if (!a.hard) details["temperature"] = t.value();
  ctx.WriteRunLog(StrCat("fuse-", name), outputs, details);
  ctx.out() << "fused " << results.size() << " trials -> "
            << (out_dir / outputs[0]).string() << "\n";
  return 0;
}

// A score table or a fusion TSV (recognised by its header).
ScoreTable LoadAnyScores(const fs::path &path) {
  std::vector<std::string> lines = ReadLines(path);
  if (!lines.empty() && lines[0] == kFusionHeader) {
    ScoreTable table;
    for (const FusionResult &r : ReadFusionResults(path)) table[r.utt_id] = r.fused;
    return table;
  }
  return LoadScores(path);
}

struct EvalArgs {
  std::string manifest;
  std::vector<std::string> scores;
};

int CmdEval(RunContext &ctx, const EvalArgs &a) {
  fs::path mp = ctx.Input(a.manifest, "manifest", "--manifest");
  if (a.scores.empty()) throw ValidationError("eval: at least one --scores NAME=PATH");
  std::vector<std::pair<std::string, fs::path>> inputs;
  std::set<std::string> names;
  for (const auto &arg : a.scores) {
    auto [name, path] = SplitAssignment(arg, "--scores");
    if (!names.insert(name).second)
      throw ValidationError(StrCat("eval: model name '", name, "' given twice"));
    inputs.push_back({name, ctx.Existing(path, "score file")});
  }
  // Models are reported by name, the order the JSON object keeps.
  std::sort(inputs.begin(), inputs.end());
  const fs::path out_dir = ctx.OutDir();
  Manifest m = LoadManifest(mp);

  json models = json::object();
  std::string table_text;
  for (const auto &[name, path] : inputs) {
    ScoreTable scores = LoadAnyScores(path);
    std::vector<ScoredTrial> trials;
    trials.reserve(m.size());
    for (const TrialRecord &r : m) {
      auto it = scores.find(r.utt_id);
      if (it == scores.end())
        throw ValidationError(StrCat("trial ", r.utt_id, " has no score in ", path.string()));
      trials.push_back({r.utt_id, it->second, r.label, r.emotion, r.source_system});
    }
    EvalReport report = Breakdown(trials);
    models[name] = json::parse(RenderReport(report, ReportFormat::kJson));
    table_text += "== " + name + "\n" + RenderReport(report, ReportFormat::kTable);
  }
  json doc;
  doc["models"] = std::move(models);
  WriteFileAtomic(out_dir / "report.json", doc.dump(2) + "\n");
  WriteFileAtomic(out_dir / "report.txt", table_text);
  ctx.WriteRunLog("eval", {"report.json", "report.txt"});
  ctx.out() << table_text;
  return 0;
}

struct SimulateArgs {
  std::string mode = "scores";
};

int CmdSimulate(RunContext &ctx, const SimulateArgs &a) {
  SimConfig sc = SimConfig::FromConfig(ctx.config(), "sim.");
  sc.seed = ctx.StageSeed("simulate");
  sc.Validate();
  const fs::path out_dir = ctx.OutDir();
  if (a.mode == "corpus") {
    Manifest m = GenerateCorpus(sc, out_dir, ctx.jobs());
    ctx.WriteRunLog("simulate", {"manifest.csv", "wav/"});
    ctx.out() << "wrote " << m.size() << " utterances under " << out_dir.string() << "\n";
    return 0;
  }
  if (a.mode != "scores")
    throw ValidationError(StrCat("simulate: --mode must be scores or corpus, got '",
                                 a.mode, "'"));
  SyntheticBatch batch = GenerateScores(sc);
  std::vector<std::string> outputs = {"manifest.csv", "logits.tsv"};
  WriteManifest(batch.trials, out_dir / "manifest.csv");
  std::vector<std::pair<std::string, EmotionLogits>> logits;
  for (size_t i = 0; i < batch.trials.size(); ++i)
    logits.push_back({batch.trials.records()[i].utt_id, batch.logits[i]});
  WriteLogits(logits, out_dir / "logits.tsv");
  for (Emotion e : kAllEmotions) {
    std::vector<std::pair<std::string, double>> rows;
    for (const ScoredTrial &t : batch.expert_scores[Index(e)])
      rows.push_back({t.utt_id, t.score});
    std::string file = SpecialistTag(e) + ".scores.tsv";
    WriteScores(rows, out_dir / file);
    outputs.push_back(file);
  }
  ctx.WriteRunLog("simulate", outputs);
  ctx.out() << "simulated " << batch.trials.size() << " trials per expert\n";
  return 0;
}

struct ReportArgs {
  std::string input, format = "table", output;
};

int CmdReport(RunContext &ctx, const ReportArgs &a) {
  fs::path in = ctx.Input(a.input, "", "--input");
  if (a.format != "table" && a.format != "json")
    throw ValidationError(StrCat("report: --format must be table or json, got '",
                                 a.format, "'"));
  const ReportFormat fmt = a.format == "json" ? ReportFormat::kJson : ReportFormat::kTable;
  const std::string text = ReadFileToString(in);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw FormatError(StrCat(in.string(), ": malformed report JSON: ", e.what()));
  }
  std::string rendered;
  if (doc.is_object() && doc.contains("models")) {
    if (fmt == ReportFormat::kJson) {
      json out = json::object();
      out["models"] = json::object();
      for (const auto &[name, r] : doc.at("models").items())
        out["models"][name] =
            json::parse(RenderReport(ParseReportJson(r.dump()), ReportFormat::kJson));
      rendered = out.dump(2) + "\n";
    } else {
      for (const auto &[name, r] : doc.at("models").items())
        rendered += "== " + name + "\n" + RenderReport(ParseReportJson(r.dump()), fmt);
    }
  } else {
    rendered = RenderReport(ParseReportJson(text), fmt);
  }
  if (a.output.empty()) ctx.out() << rendered;
  else WriteFileAtomic(a.output, rendered);
  return 0;
}

int ExitCodeFor(const std::exception &e) {
  if (dynamic_cast<const ValidationError *>(&e) || dynamic_cast<const ConfigError *>(&e) ||
      dynamic_cast<const FormatError *>(&e))
    return 2;
  return 1;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Gated ensemble of emotion-specific anti-spoofing experts", "gem"};
  app.set_version_flag("--version", kGemVersion);
  app.require_subcommand(1);
  app.fallthrough();

  CommonFlags common;
  app.add_option("--config", common.config, "key = value config file");
  app.add_option("--jobs", common.jobs, "worker threads (outputs do not depend on it)");
  app.add_option("--out", common.out, "output directory");
  app.add_option("--seed", common.seed, "master seed; stage seeds derive from it");

  std::function<int(RunContext &)> action;
  auto sub = [&](const char *name, const char *help) {
    CLI::App *s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  BuildManifestArgs bm;
  auto *c_bm = sub("build-manifest", "validate a CSV or scan a WAV tree into manifest.csv");
  c_bm->add_option("--input", bm.input, "existing manifest CSV");
  c_bm->add_option("--wav-root", bm.wav_root, "<system>/<speaker>/<emotion>/<utt>.wav tree");
  c_bm->callback([&] { action = [&](RunContext &c) { return CmdBuildManifest(c, bm); }; });

  SplitArgs sp;
  auto *c_sp = sub("split", "speaker/system disjoint train, valid and test manifests");
  c_sp->add_option("--manifest", sp.manifest);
  c_sp->add_option("--split-spec", sp.split_spec, "file with *_speakers and *_system keys");
  c_sp->callback([&] { action = [&](RunContext &c) { return CmdSplit(c, sp); }; });

  ExtractArgs ex;
  auto *c_ex = sub("extract-features", "log mel band statistics for every trial");
  c_ex->add_option("--manifest", ex.manifest);
  c_ex->add_option("--fit-manifest", ex.fit_manifest,
                   "trials used to fit the normalizer (default: all)");
  c_ex->callback([&] { action = [&](RunContext &c) { return CmdExtractFeatures(c, ex); }; });

  TrainArgs tr;
  auto *c_tr = sub("train-expert", "train the generalist expert");
  c_tr->add_option("--manifest", tr.manifest);
  c_tr->add_option("--features", tr.features);
  c_tr->callback([&] { action = [&](RunContext &c) { return CmdTrainExpert(c, tr); }; });

  auto *c_spz = sub("specialize", "fine-tune the generalist on one emotion");
  c_spz->add_option("--base", tr.base, "generalist model");
  c_spz->add_option("--emotion", tr.emotion);
  c_spz->add_option("--manifest", tr.manifest);
  c_spz->add_option("--features", tr.features);
  c_spz->callback([&] { action = [&](RunContext &c) { return CmdSpecialize(c, tr); }; });

  auto *c_tg = sub("train-gate", "train the emotion gate");
  c_tg->add_option("--manifest", tr.manifest);
  c_tg->add_option("--features", tr.features);
  c_tg->callback([&] { action = [&](RunContext &c) { return CmdTrainGate(c, tr); }; });

  ScoreArgs sc;
  auto *c_sc = sub("score", "score trials with one expert, or emit gate logits");
  c_sc->add_option("--manifest", sc.manifest);
  c_sc->add_option("--features", sc.features);
  c_sc->add_option("--model", sc.model);
  c_sc->add_option("--gate", sc.gate);
  c_sc->callback([&] { action = [&](RunContext &c) { return CmdScore(c, sc); }; });

  FuseArgs fu;
  auto *c_fu = sub("fuse", "gated fusion of four experts");
  c_fu->add_option("--manifest", fu.manifest);
  c_fu->add_option("--features", fu.features);
  c_fu->add_option("--expert-model", fu.expert_models, "EMOTION=MODEL (repeatable)");
  c_fu->add_option("--expert-scores", fu.expert_scores, "EMOTION=SCORES.tsv (repeatable)");
  c_fu->add_option("--gate", fu.gate);
  c_fu->add_option("--logits", fu.logits);
  c_fu->add_option("--temperature", fu.temperature);
  c_fu->add_option("--threshold", fu.threshold, "also write 0/1 decisions");
  c_fu->add_option("--name", fu.name, "output file prefix");
  c_fu->add_flag("--hard", fu.hard, "argmax gate instead of softened weights");
  c_fu->callback([&] { action = [&](RunContext &c) { return CmdFuse(c, fu); }; });

  EvalArgs ev;
  auto *c_ev = sub("eval", "EER breakdown per emotion and per spoof system");
  c_ev->add_option("--manifest", ev.manifest);
  c_ev->add_option("--scores", ev.scores, "NAME=PATH (repeatable)");
  c_ev->callback([&] { action = [&](RunContext &c) { return CmdEval(c, ev); }; });

  SimulateArgs si;
  auto *c_si = sub("simulate", "synthetic expert scores and logits, or a WAV corpus");
  c_si->add_option("--mode", si.mode, "scores | corpus");
  c_si->callback([&] { action = [&](RunContext &c) { return CmdSimulate(c, si); }; });

  ReportArgs rp;
  auto *c_rp = sub("report", "render a report JSON");
  c_rp->add_option("--input", rp.input);
  c_rp->add_option("--format", rp.format, "table | json");
  c_rp->add_option("--output", rp.output, "write here instead of stdout");
  c_rp->callback([&] { action = [&](RunContext &c) { return CmdReport(c, rp); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    RunContext ctx(app.get_subcommands().front()->get_name(), common, out);
    return action(ctx);
  } catch (const std::exception &e) {
    err << "gem: error: " << e.what() << "\n";
    return ExitCodeFor(e);
  }
}

int RunCli(int argc, const char *const *argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return RunCli(args, std::cout, std::cerr);
}

}  // namespace gem
