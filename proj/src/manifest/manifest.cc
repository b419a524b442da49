// manifest/manifest.cc

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

#include "manifest/manifest.h"

#include <map>

#include "base/gem-common.h"
#include "base/text-utils.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;

void ValidateRecord(const TrialRecord &r) {
  if (r.utt_id.empty()) throw ValidationError("empty utt_id");
  if (r.speaker_id.empty())
    throw ValidationError(StrCat("empty speaker_id for ", r.utt_id));
  if (r.source_system.empty())
    throw ValidationError(StrCat("empty source_system for ", r.utt_id));
  bool bonafide_system = (r.source_system == kBonafideSystem);
  if ((r.label == Label::kBonafide) != bonafide_system)
    throw ValidationError(StrCat("label/system mismatch for ", r.utt_id,
                                 ": label=", LabelName(r.label),
                                 " source_system=", r.source_system));
  if (r.duration_s && !(*r.duration_s >= 0.0))
    throw ValidationError(StrCat("negative duration for ", r.utt_id));
}

Manifest::Manifest(std::vector<TrialRecord> records, std::string provenance)
    : records_(std::move(records)), provenance_(std::move(provenance)) {
  index_.reserve(records_.size());
  for (size_t i = 0; i < records_.size(); ++i) {
    ValidateRecord(records_[i]);
    if (!index_.emplace(records_[i].utt_id, i).second)
      throw ValidationError(StrCat("duplicate utt_id ", records_[i].utt_id));
  }
}

const TrialRecord *Manifest::Find(std::string_view utt_id) const {
  auto it = index_.find(std::string(utt_id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

Manifest ParseManifest(std::string_view text, const std::string &source_name) {
  std::vector<std::string> lines = SplitString(text, '\n');
  // A final newline leaves one empty trailing element.
  while (!lines.empty() && Trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty())
    throw FormatError(StrCat(source_name, ": missing header line"));
  for (auto &line : lines)
    if (!line.empty() && line.back() == '\r') line.pop_back();
  if (lines[0] != kManifestHeader)
    throw FormatError(StrCat(source_name, ": bad header '", lines[0],
                             "', expected '", kManifestHeader, "'"));

  std::vector<TrialRecord> records;
  std::unordered_map<std::string, size_t> seen;
  for (size_t i = 1; i < lines.size(); ++i) {
    const size_t line_no = i + 1;
    std::vector<std::string> f = SplitString(lines[i], ',');
    if (f.size() != 7)
      throw FormatError(StrCat(source_name, ":", line_no, ": expected 7 fields, got ",
                               f.size()));
    TrialRecord r;
    r.utt_id = std::string(Trim(f[0]));
    r.speaker_id = std::string(Trim(f[1]));
    auto emotion = ParseEmotion(f[2]);
    if (!emotion)
      throw ValidationError(StrCat(source_name, ":", line_no,
                                   ": unknown emotion '", f[2], "'"));
    r.emotion = *emotion;
    auto label = ParseLabel(f[3]);
    if (!label)
      throw ValidationError(StrCat(source_name, ":", line_no,
                                   ": unknown label '", f[3], "'"));
    r.label = *label;
    r.source_system = ToLower(Trim(f[4]));
    r.audio_path = std::string(Trim(f[5]));
    if (!Trim(f[6]).empty()) {
      auto d = ParseFiniteDouble(f[6]);
      if (!d)
        throw FormatError(StrCat(source_name, ":", line_no,
                                 ": bad duration_s '", f[6], "'"));
      r.duration_s = *d;
    }
    try {
      ValidateRecord(r);
    } catch (const ValidationError &e) {
      throw ValidationError(StrCat(source_name, ":", line_no, ": ", e.what()));
    }
    auto [it, inserted] = seen.emplace(r.utt_id, line_no);
    if (!inserted)
      throw ValidationError(StrCat(source_name, ":", line_no,
                                   ": duplicate utt_id ", r.utt_id,
                                   " (first seen on line ", it->second, ")"));
    records.push_back(std::move(r));
  }
  return Manifest(std::move(records), source_name);
}

Manifest LoadManifest(const fs::path &path) {
  return ParseManifest(ReadFileToString(path), path.string());
}

std::string FormatManifest(const Manifest &manifest) {
  std::string out(kManifestHeader);
  out += '\n';
  for (const TrialRecord &r : manifest) {
    out += r.utt_id;
    out += ',';
    out += r.speaker_id;
    out += ',';
    out += EmotionName(r.emotion);
    out += ',';
    out += LabelName(r.label);
    out += ',';
    out += r.source_system;
    out += ',';
    out += r.audio_path;
    out += ',';
    if (r.duration_s) out += FormatReal(*r.duration_s, 9);
    out += '\n';
  }
  return out;
}

void WriteManifest(const Manifest &manifest, const fs::path &path) {
  WriteFileAtomic(path, FormatManifest(manifest));
}

void SplitSpec::Validate() const {
  auto check_disjoint = [](const std::set<std::string> &a, const char *an,
                           const std::set<std::string> &b, const char *bn) {
    for (const std::string &s : a)
      if (b.count(s))
        throw ConfigError(StrCat("speaker ", s, " is in both ", an, " and ", bn));
  };
  check_disjoint(train_speakers, "train", valid_speakers, "valid");
  check_disjoint(train_speakers, "train", test_speakers, "test");
  check_disjoint(valid_speakers, "valid", test_speakers, "test");
  for (const std::string *sys : {&train_system, &valid_system, &test_system}) {
    if (sys->empty()) throw ConfigError("split system identifier is empty");
    if (*sys == kBonafideSystem)
      throw ConfigError("split system cannot be 'bonafide'");
  }
  if (train_system == valid_system || train_system == test_system ||
      valid_system == test_system)
    throw ConfigError(StrCat("split systems must be distinct (train=",
                             train_system, ", valid=", valid_system,
                             ", test=", test_system, ")"));
}

SplitSpec SplitSpecFromConfig(const KeyValueConfig &config,
                              const std::string &prefix) {
  SplitSpec spec;
  auto to_set = [&](const char *key) {
    auto list = config.GetList(prefix + key);
    return std::set<std::string>(list.begin(), list.end());
  };
  spec.train_speakers = to_set("train_speakers");
  spec.valid_speakers = to_set("valid_speakers");
  spec.test_speakers = to_set("test_speakers");
  spec.train_system = ToLower(config.GetString(prefix + "train_system", ""));
  spec.valid_system = ToLower(config.GetString(prefix + "valid_system", ""));
  spec.test_system = ToLower(config.GetString(prefix + "test_system", ""));
  return spec;
}

SplitSpec ReadSplitSpec(const fs::path &path) {
  KeyValueConfig cfg = KeyValueConfig::ReadFile(path);
  cfg.CheckKnownKeys({"train_speakers", "valid_speakers", "test_speakers",
                      "train_system", "valid_system", "test_system"});
  return SplitSpecFromConfig(cfg);
}

Splits BuildSplits(const Manifest &manifest, const SplitSpec &spec) {
  spec.Validate();

  enum Part { kTrain = 0, kValid = 1, kTest = 2 };
  std::map<std::string, Part> owner;
  for (const auto &s : spec.train_speakers) owner[s] = kTrain;
  for (const auto &s : spec.valid_speakers) owner[s] = kValid;
  for (const auto &s : spec.test_speakers) owner[s] = kTest;

  std::set<std::string> present;
  for (const TrialRecord &r : manifest) present.insert(r.speaker_id);
  for (const auto &[speaker, part] : owner)
    if (!present.count(speaker))
      throw ConfigError(StrCat("split speaker ", speaker,
                               " does not appear in manifest ",
                               manifest.provenance()));

  const std::string *systems[3] = {&spec.train_system, &spec.valid_system,
                                   &spec.test_system};
  std::vector<TrialRecord> parts[3];
  std::set<std::string> unassigned;
  for (const TrialRecord &r : manifest) {
    auto it = owner.find(r.speaker_id);
    if (it == owner.end()) {
      unassigned.insert(r.speaker_id);
      continue;
    }
    Part p = it->second;
    if (r.label == Label::kSpoof && r.source_system != *systems[p]) continue;
    parts[p].push_back(r);
  }
  if (!unassigned.empty()) {
    std::string names;
    for (const auto &s : unassigned) names += (names.empty() ? "" : ",") + s;
    GEM_WARN("speakers not in any split were dropped: ", names);
  }
  const std::string &src = manifest.provenance();
  return Splits{Manifest(std::move(parts[kTrain]), src + "#train"),
                Manifest(std::move(parts[kValid]), src + "#valid"),
                Manifest(std::move(parts[kTest]), src + "#test")};
}

bool TrialFilter::Matches(const TrialRecord &r) const {
  if (emotions && !emotions->count(r.emotion)) return false;
  if (label && *label != r.label) return false;
  if (systems && !systems->count(r.source_system)) return false;
  return true;
}

TrialFilter TrialFilter::ByEmotion(Emotion e) {
  TrialFilter f;
  f.emotions = std::set<Emotion>{e};
  return f;
}

TrialFilter TrialFilter::Has() {
  TrialFilter f;
  f.emotions = std::set<Emotion>(kHasEmotions.begin(), kHasEmotions.end());
  return f;
}

Manifest Filter(const Manifest &manifest, const TrialFilter &filter) {
  return Filter(manifest,
                [&](const TrialRecord &r) { return filter.Matches(r); });
}

Manifest Filter(const Manifest &manifest,
                const std::function<bool(const TrialRecord &)> &predicate) {
  std::vector<TrialRecord> kept;
  for (const TrialRecord &r : manifest)
    if (predicate(r)) kept.push_back(r);
  return Manifest(std::move(kept), manifest.provenance());
}

}  // namespace gem
