// manifest/manifest-test.cc

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

#include <set>

#include "doctest.h"
#include "fixtures.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "base/rng.h"
#include "base/text-utils.h"
#include "manifest/manifest.h"

namespace gem {

using testing::TwelveRowCsv;

TEST_CASE("header-only manifest is empty") {
  Manifest m = ParseManifest(std::string(kManifestHeader) + "\n", "h");
  CHECK(m.size() == 0);
}

TEST_CASE("twelve-row fixture") {
  Manifest m = ParseManifest(TwelveRowCsv(), "fixture");
  CHECK(m.size() == 12);
  int bona = 0;
  for (const auto &r : m) bona += r.label == Label::kBonafide;
  CHECK(bona == 4);
  CHECK(m.records()[0].utt_id == "u0");
  CHECK(m.records()[11].utt_id == "u11");
  CHECK(m.Find("u5") != nullptr);
  CHECK(m.Find("u99") == nullptr);

  Manifest sad = Filter(m, TrialFilter::ByEmotion(Emotion::kSad));
  CHECK(sad.size() == 3);
  int sad_bona = 0;
  for (const auto &r : sad) sad_bona += r.label == Label::kBonafide;
  CHECK(sad_bona == 1);
}

TEST_CASE("load errors") {
  const std::string h = std::string(kManifestHeader) + "\n";
  SUBCASE("duplicate id is named") {
    std::string csv = h + "u1,s,happy,bonafide,bonafide,,\nu1,s,sad,bonafide,bonafide,,\n";
    try {
      ParseManifest(csv, "dup.csv");
      FAIL("expected an error");
    } catch (const ValidationError &e) {
      CHECK(std::string(e.what()).find("u1") != std::string::npos);
    }
  }
  SUBCASE("unknown emotion reports the row") {
    std::string csv = h + "u1,s,happy,bonafide,bonafide,,\nu2,s,bored,bonafide,bonafide,,\n";
    try {
      ParseManifest(csv, "emo.csv");
      FAIL("expected an error");
    } catch (const ValidationError &e) {
      CHECK(std::string(e.what()).find(":3") != std::string::npos);
    }
  }
  SUBCASE("label and system must agree") {
    CHECK_THROWS_AS(ParseManifest(h + "u1,s,happy,spoof,bonafide,,\n", "x"),
                    ValidationError);
    CHECK_THROWS_AS(ParseManifest(h + "u1,s,happy,bonafide,f5tts,,\n", "x"),
                    ValidationError);
  }
  SUBCASE("wrong header") {
    CHECK_THROWS(ParseManifest("id,speaker\n", "x"));
  }
  SUBCASE("missing file") {
    CHECK_THROWS(LoadManifest("/nonexistent/manifest.csv"));
  }
}

TEST_CASE("emotion aliases in manifests") {
  std::string csv = std::string(kManifestHeader) +
                    "\na,s,Happiness,bonafide,bonafide,,\nb,s,ANGER,bonafide,bonafide,,\n";
  Manifest m = ParseManifest(csv, "x");
  CHECK(m.records()[0].emotion == Emotion::kHappy);
  CHECK(m.records()[1].emotion == Emotion::kAngry);
}

TEST_CASE("manifest round trip is byte identical") {
  std::string csv = std::string(kManifestHeader) +
                    "\na,s1,happy,bonafide,bonafide,wav/a.wav,1.5\n"
                    "b,s2,sad,spoof,f5tts,,\n";
  Manifest m = ParseManifest(csv, "x");
  CHECK(m.records()[0].duration_s == 1.5);
  CHECK_FALSE(m.records()[1].duration_s.has_value());
  CHECK(FormatManifest(m) == csv);
  testing::TempDir dir;
  WriteManifest(m, dir / "m.csv");
  CHECK(LoadManifest(dir / "m.csv").records() == m.records());
}

TEST_CASE("split spec validation") {
  SplitSpec s = testing::PaperSplitSpec();
  CHECK_NOTHROW(s.Validate());
  SplitSpec same = s;
  same.test_system = same.train_system;
  CHECK_THROWS_AS(same.Validate(), ConfigError);
  SplitSpec overlap = s;
  overlap.test_speakers.insert(*s.train_speakers.begin());
  CHECK_THROWS_AS(overlap.Validate(), ConfigError);

  Manifest m = testing::FullLayoutManifest();
  CHECK_THROWS_AS(BuildSplits(m, same), ConfigError);
  SplitSpec ghost = s;
  ghost.valid_speakers.insert("9999");
  CHECK_THROWS_AS(BuildSplits(m, ghost), ConfigError);
}

TEST_CASE("split spec from a key value file") {
  testing::TempDir dir;
  WriteFileAtomic(dir / "split.cfg",
                  "train_speakers = 0011,0012,0013,0014\nvalid_speakers=0015,0016\n"
                  "test_speakers=0017,0018,0019,0020\ntrain_system=CosyVoice\n"
                  "valid_system=f5tts\ntest_system=styletts2\n");
  SplitSpec s = ReadSplitSpec(dir / "split.cfg");
  CHECK(s.train_speakers == testing::PaperSplitSpec().train_speakers);
  CHECK(s.train_system == "cosyvoice");
  WriteFileAtomic(dir / "bad.cfg", "train_speakerz = 1\n");
  CHECK_THROWS_AS(ReadSplitSpec(dir / "bad.cfg"), ConfigError);
}

TEST_CASE("full layout split counts") {
  Manifest m = testing::FullLayoutManifest();
  REQUIRE(m.size() == 48000);
  Splits s = BuildSplits(m, testing::PaperSplitSpec());
  auto count = [](const Manifest &part, Label l) {
    size_t n = 0;
    for (const auto &r : part) n += r.label == l;
    return n;
  };
  CHECK(s.train.size() == 9600);
  CHECK(count(s.train, Label::kBonafide) == 4800);
  CHECK(count(s.train, Label::kSpoof) == 4800);
  CHECK(count(s.valid, Label::kBonafide) == 2400);
  CHECK(count(s.valid, Label::kSpoof) == 2400);
  CHECK(count(s.test, Label::kBonafide) == 4800);
  CHECK(count(s.test, Label::kSpoof) == 4800);
}

TEST_CASE("all speakers in train leaves valid and test empty") {
  std::string csv = std::string(kManifestHeader) + "\n";
  for (int i = 0; i < 4; ++i)
    csv += "b" + std::to_string(i) + ",s" + std::to_string(i % 2) +
           ",happy,bonafide,bonafide,,\n";
  csv += "x0,s0,happy,spoof,tts1,,\n";
  Manifest m = ParseManifest(csv, "toy");
  SplitSpec spec;
  spec.train_speakers = {"s0", "s1"};
  spec.train_system = "tts1";
  spec.valid_system = "tts2";
  spec.test_system = "tts3";
  Splits s = BuildSplits(m, spec);
  CHECK(s.train.size() == 5);
  CHECK(s.valid.empty());
  CHECK(s.test.empty());
}

TEST_CASE("unknown speakers are dropped with a warning") {
  std::string csv = std::string(kManifestHeader) +
                    "\na,s0,happy,bonafide,bonafide,,\nb,zz,happy,bonafide,bonafide,,\n";
  Manifest m = ParseManifest(csv, "toy");
  SplitSpec spec;
  spec.train_speakers = {"s0"};
  spec.train_system = "t1";
  spec.valid_system = "t2";
  spec.test_system = "t3";
  bool saved = WarningsEnabled();
  WarningsEnabled() = false;
  long before = WarningCount();
  Splits s = BuildSplits(m, spec);
  WarningsEnabled() = saved;
  CHECK(WarningCount() == before + 1);
  CHECK(s.train.size() == 1);
}

// Random manifests and random specs: partition, conservation, determinism.
TEST_CASE("split properties on random manifests") {
  Rng rng(2026);
  for (int round = 0; round < 100; ++round) {
    const int n_speakers = 3 + static_cast<int>(rng.UniformInt(6));
    const int n_systems = 3 + static_cast<int>(rng.UniformInt(2));
    std::vector<TrialRecord> records;
    const int n = 20 + static_cast<int>(rng.UniformInt(200));
    for (int i = 0; i < n; ++i) {
      TrialRecord r;
      r.utt_id = "u" + std::to_string(i);
      r.speaker_id = "s" + std::to_string(rng.UniformInt(n_speakers));
      r.emotion = static_cast<Emotion>(rng.UniformInt(4));
      int sys = static_cast<int>(rng.UniformInt(n_systems + 1));
      r.source_system = sys == 0 ? "bonafide" : "t" + std::to_string(sys);
      r.label = sys == 0 ? Label::kBonafide : Label::kSpoof;
      records.push_back(r);
    }
    Manifest m(records, "random");
    std::set<std::string> present;
    for (const auto &r : m) present.insert(r.speaker_id);
    SplitSpec spec;
    for (const auto &s : present) {
      switch (rng.UniformInt(4)) {
        case 0: spec.train_speakers.insert(s); break;
        case 1: spec.valid_speakers.insert(s); break;
        case 2: spec.test_speakers.insert(s); break;
        default: break;  // left out: dropped
      }
    }
    spec.train_system = "t1";
    spec.valid_system = "t2";
    spec.test_system = "t3";
    bool saved = WarningsEnabled();
    WarningsEnabled() = false;
    Splits a = BuildSplits(m, spec);
    Splits b = BuildSplits(m, spec);
    WarningsEnabled() = saved;

    CHECK(FormatManifest(a.train) == FormatManifest(b.train));
    CHECK(FormatManifest(a.test) == FormatManifest(b.test));
    CHECK(a.train.size() + a.valid.size() + a.test.size() <= m.size());

    std::set<std::string> ids;
    const std::pair<const Manifest *, const SplitSpec *> parts[] = {
        {&a.train, &spec}, {&a.valid, &spec}, {&a.test, &spec}};
    const std::set<std::string> *speakers[] = {&spec.train_speakers,
                                               &spec.valid_speakers,
                                               &spec.test_speakers};
    const std::string systems[] = {"t1", "t2", "t3"};
    size_t expected = 0;
    for (const auto &r : m)
      for (int k = 0; k < 3; ++k)
        if (speakers[k]->count(r.speaker_id) &&
            (r.label == Label::kBonafide || r.source_system == systems[k]))
          ++expected;
    CHECK(a.train.size() + a.valid.size() + a.test.size() == expected);
    for (int k = 0; k < 3; ++k) {
      for (const auto &r : *parts[k].first) {
        CHECK(ids.insert(r.utt_id).second);
        CHECK(speakers[k]->count(r.speaker_id) == 1);
        if (r.label == Label::kSpoof) CHECK(r.source_system == systems[k]);
        CHECK(m.Find(r.utt_id) != nullptr);
      }
    }
  }
}

TEST_CASE("filter identities") {
  Manifest empty;
  CHECK(Filter(empty, TrialFilter::Has()).empty());
  Manifest m = ParseManifest(TwelveRowCsv(), "fixture");
  size_t has = 0;
  for (Emotion e : kHasEmotions) has += Filter(m, TrialFilter::ByEmotion(e)).size();
  CHECK(has == m.size() - Filter(m, TrialFilter::ByEmotion(Emotion::kNeutral)).size());
  CHECK(Filter(m, TrialFilter::Has()).size() == has);

  TrialFilter f;
  f.label = Label::kSpoof;
  f.systems = std::set<std::string>{"sysa"};
  Manifest spoof_a = Filter(m, f);
  CHECK(spoof_a.size() == 4);
  Manifest ordered = Filter(m, [](const TrialRecord &r) { return r.utt_id != "u0"; });
  CHECK(ordered.records().front().utt_id == "u1");
}

}  // namespace gem
