// base/base-test.cc

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

#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "test-util.h"

#include "base/batch-schedule.h"
#include "base/emotion.h"
#include "base/gem-common.h"
#include "base/kv-config.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "base/text-utils.h"

namespace gem {

TEST_CASE("emotion order and parsing") {
  CHECK(Index(Emotion::kNeutral) == 0);
  CHECK(Index(Emotion::kHappy) == 1);
  CHECK(Index(Emotion::kAngry) == 2);
  CHECK(Index(Emotion::kSad) == 3);
  CHECK(ParseEmotion("HAPPY") == Emotion::kHappy);
  CHECK(ParseEmotion("happiness") == Emotion::kHappy);
  CHECK(ParseEmotion("Anger") == Emotion::kAngry);
  CHECK(ParseEmotion("sadness") == Emotion::kSad);
  CHECK(ParseEmotion(" neutral ") == Emotion::kNeutral);
  CHECK_FALSE(ParseEmotion("surprise").has_value());
  CHECK(SpecialistTag(Emotion::kAngry) == "model-a");
  CHECK(ParseLabel("Spoof") == Label::kSpoof);
  CHECK_FALSE(ParseLabel("fake").has_value());
  for (Emotion e : kAllEmotions) CHECK(ParseEmotion(EmotionName(e)) == e);
}

TEST_CASE("number parsing is strict") {
  CHECK(ParseFiniteDouble("0.25") == 0.25);
  CHECK(ParseFiniteDouble("+1e3") == 1000.0);
  CHECK(ParseFiniteDouble(" -2 ") == -2.0);
  CHECK_FALSE(ParseFiniteDouble("nan").has_value());
  CHECK_FALSE(ParseFiniteDouble("inf").has_value());
  CHECK_FALSE(ParseFiniteDouble("1.5x").has_value());
  CHECK_FALSE(ParseFiniteDouble("").has_value());
  CHECK(ParseInt("-7") == -7);
  CHECK_FALSE(ParseUint("-7").has_value());
  CHECK(ParseUint("18446744073709551615") == 18446744073709551615ull);
}

TEST_CASE("string helpers") {
  CHECK(SplitString("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
  CHECK(Trim("  x y \t") == "x y");
  CHECK(ToLower("AbC") == "abc");
  CHECK(FormatReal(0.1, 9) == "0.1");
  CHECK(Fnv1a64("") == 14695981039346656037ull);
}

TEST_CASE("atomic write round trip") {
  testing::TempDir dir;
  auto p = dir / "a/b/c.txt";
  WriteFileAtomic(p, "hello\r\nworld\n");
  CHECK(ReadFileToString(p) == "hello\r\nworld\n");
  CHECK(ReadLines(p) == std::vector<std::string>{"hello", "world"});
  CHECK_FALSE(std::filesystem::exists(p.string() + ".tmp"));
  CHECK_THROWS_AS(ReadLines(dir / "missing"), IoError);
}

TEST_CASE("key value config") {
  auto cfg = KeyValueConfig::Parse(
      "# comment\nseed = 7\ntrain.lr=0.5  # trailing\nlist = a, b ,c\nflag = yes\n");
  CHECK(cfg.GetUint("seed", 0) == 7);
  CHECK(cfg.GetDouble("train.lr", 0) == 0.5);
  CHECK(cfg.GetList("list") == std::vector<std::string>{"a", "b", "c"});
  CHECK(cfg.GetBool("flag", false));
  CHECK(cfg.GetInt("absent", -3) == -3);
  CHECK_NOTHROW(cfg.CheckKnownKeys({"seed", "train.*", "list", "flag"}));
  CHECK_THROWS_AS(cfg.CheckKnownKeys({"seed", "list", "flag"}), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::Parse("a=1\na=2\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::Parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::Parse("x = abc").GetDouble("x", 0), ConfigError);

  testing::TempDir dir;
  WriteFileAtomic(dir / "sub/run.cfg", "data = ../data/m.csv\n");
  auto file_cfg = KeyValueConfig::ReadFile(dir / "sub/run.cfg");
  CHECK(file_cfg.ResolvePath("../data/m.csv") == dir / "sub" / "../data/m.csv");
  CHECK(file_cfg.ResolvePath("/abs/x") == "/abs/x");
}

TEST_CASE("seed derivation") {
  CHECK(DeriveSeed(1, "train") == DeriveSeed(1, "train"));
  CHECK(DeriveSeed(1, "train") != DeriveSeed(2, "train"));
  CHECK(DeriveSeed(1, "train") != DeriveSeed(1, "gate"));
  CHECK(DeriveSeed(0, {1, 2, 3}) != DeriveSeed(0, {1, 3, 2}));
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 4; ++a)
    for (std::uint64_t b = 0; b < 4; ++b)
      for (std::uint64_t c = 0; c < 2; ++c) seen.insert(DeriveSeed(9, {a, b, c}));
  CHECK(seen.size() == 32);
}

TEST_CASE("rng draws") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.NextU64() == b.NextU64());

  Rng r(3);
  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    double u = r.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
  for (int i = 0; i < n; ++i) {
    double g = r.Gaussian();
    sum += g;
    sum2 += g * g;
  }
  double mean = sum / n, var = sum2 / n - mean * mean;
  // Standard errors: 1/sqrt(n) ~ 0.0022 for the mean, sqrt(2/n) ~ 0.0032
  // for the variance; allow five of them.
  CHECK(std::abs(mean) < 0.012);
  CHECK(std::abs(var - 1.0) < 0.016);

  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    auto k = r.UniformInt(7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("batch schedule covers every index once per epoch") {
  BatchSchedule s(10, 4, 1);
  CHECK(s.NumBatches() == 3);
  for (int epoch = 0; epoch < 3; ++epoch) {
    s.NextEpoch();
    std::multiset<size_t> seen;
    for (size_t b = 0; b < s.NumBatches(); ++b)
      for (size_t i : s.Batch(b)) seen.insert(i);
    CHECK(seen.size() == 10);
    CHECK(std::set<size_t>(seen.begin(), seen.end()).size() == 10);
    CHECK(s.Batch(2).size() == 2);
  }
  BatchSchedule t(10, 4, 1);
  t.NextEpoch();
  BatchSchedule u(10, 4, 1);
  u.NextEpoch();
  CHECK(std::vector<size_t>(t.Batch(0).begin(), t.Batch(0).end()) ==
        std::vector<size_t>(u.Batch(0).begin(), u.Batch(0).end()));
}

TEST_CASE("parallel for is order independent and propagates errors") {
  for (int jobs : {1, 3, 8}) {
    std::vector<int> out(100, -1);
    ParallelFor(out.size(), jobs, [&](size_t i) { out[i] = static_cast<int>(i * i); });
    for (size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  }
  CHECK_THROWS_AS(ParallelFor(50, 4,
                              [](size_t i) {
                                if (i == 17) throw InputError("boom");
                              }),
                  InputError);
}

TEST_CASE("warnings are counted even when silenced") {
  bool saved = WarningsEnabled();
  WarningsEnabled() = false;
  long before = WarningCount();
  GEM_WARN("x=", 1);
  CHECK(WarningCount() == before + 1);
  WarningsEnabled() = saved;
}

}  // namespace gem
