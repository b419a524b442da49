// manifest/manifest.h

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

#ifndef GEM_MANIFEST_MANIFEST_H_
#define GEM_MANIFEST_MANIFEST_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "base/emotion.h"
#include "base/kv-config.h"

namespace gem {

/// One utterance of the corpus.
struct TrialRecord {
  std::string utt_id;
  std::string speaker_id;
  Emotion emotion = Emotion::kNeutral;
  Label label = Label::kBonafide;
  /// "bonafide" for real speech, otherwise the spoofing system's name.
  std::string source_system;
  /// Empty when the trial has no audio (score-only corpora).
  std::string audio_path;
  std::optional<double> duration_s;

  bool operator==(const TrialRecord &) const = default;
};

/// Throws ValidationError if the label and source_system disagree or a
/// required field is empty.
void ValidateRecord(const TrialRecord &record);

/// An ordered, validated collection of trials with unique utt_ids.
class Manifest {
 public:
  Manifest() = default;

  /// Validates every record and the uniqueness of utt_id.
  explicit Manifest(std::vector<TrialRecord> records,
                    std::string provenance = "");

  const std::vector<TrialRecord> &records() const { return records_; }
  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::string &provenance() const { return provenance_; }

  /// nullptr when absent.
  const TrialRecord *Find(std::string_view utt_id) const;

  std::vector<TrialRecord>::const_iterator begin() const {
    return records_.begin();
  }
  std::vector<TrialRecord>::const_iterator end() const {
    return records_.end();
  }

 private:
  std::vector<TrialRecord> records_;
  std::unordered_map<std::string, size_t> index_;
  std::string provenance_;
};

inline constexpr std::string_view kManifestHeader =
    "utt_id,speaker_id,emotion,label,source_system,audio_path,duration_s";

/// Parses manifest CSV text.  Errors carry `source_name` and the 1-based
/// line number.
Manifest ParseManifest(std::string_view text, const std::string &source_name);
Manifest LoadManifest(const std::filesystem::path &path);

/// Canonical CSV form (lower-case emotion names, %.9g durations).
std::string FormatManifest(const Manifest &manifest);
void WriteManifest(const Manifest &manifest, const std::filesystem::path &path);

/// Speaker- and system-disjoint partition of a corpus.
struct SplitSpec {
  std::set<std::string> train_speakers;
  std::set<std::string> valid_speakers;
  std::set<std::string> test_speakers;
  std::string train_system;
  std::string valid_system;
  std::string test_system;

  /// Throws ConfigError unless the speaker sets are pairwise disjoint and
  /// the three systems are distinct, non-empty and not "bonafide".
  void Validate() const;
};

/// Reads train_speakers / valid_speakers / test_speakers (comma lists) and
/// train_system / valid_system / test_system, each under `prefix`.
SplitSpec SplitSpecFromConfig(const KeyValueConfig &config,
                              const std::string &prefix = "");
SplitSpec ReadSplitSpec(const std::filesystem::path &path);

struct Splits {
  Manifest train;
  Manifest valid;
  Manifest test;
};

/// Assigns every record to the split owning its speaker.  Bona-fide records
/// always follow their speaker; spoof records are kept only when their
/// source_system is that split's system.  Speakers not named in the spec
/// are dropped with a warning.
Splits BuildSplits(const Manifest &manifest, const SplitSpec &spec);

/// Conjunction of optional constraints; an unset field matches everything.
struct TrialFilter {
  std::optional<std::set<Emotion>> emotions;
  std::optional<Label> label;
  std::optional<std::set<std::string>> systems;

  bool Matches(const TrialRecord &record) const;

  static TrialFilter ByEmotion(Emotion e);
  /// Happy, Angry and Sad pooled.
  static TrialFilter Has();
};

Manifest Filter(const Manifest &manifest, const TrialFilter &filter);
Manifest Filter(const Manifest &manifest,
                const std::function<bool(const TrialRecord &)> &predicate);

}  // namespace gem

#endif  // GEM_MANIFEST_MANIFEST_H_
