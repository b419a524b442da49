// simulator/simulator.cc

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

#include "simulator/simulator.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "base/gem-common.h"
#include "base/parallel.h"
#include "base/rng.h"
#include "base/text-utils.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;

namespace {

// Stream kinds, the first coordinate of every derived seed.
constexpr std::uint64_t kScoreStream = 1;
constexpr std::uint64_t kLogitStream = 2;
constexpr std::uint64_t kAudioStream = 3;

constexpr std::array<Label, 2> kLabels = {Label::kBonafide, Label::kSpoof};

std::string UttId(Emotion e, Label l, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%05zu", index);
  return StrCat("sim-", EmotionName(e), "-", LabelName(l), "-", buf);
}

std::string SpeakerId(const SimConfig &c, size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spk%02zu",
                index % static_cast<size_t>(c.num_speakers) + 1);
  return buf;
}

// Fixed per-emotion artifact frequency, above every emotion band.
double ArtifactHz(Emotion e) { return 4500.0 + 700.0 * Index(e); }

}  // namespace

SimConfig::SimConfig() {
  SetScoreParams({0.75, 0.1}, {0.25, 0.1}, {0.6, 0.15}, {0.4, 0.15});
}

void SimConfig::SetScoreParams(GaussianParams specialist_bonafide,
                               GaussianParams specialist_spoof,
                               GaussianParams off_bonafide,
                               GaussianParams off_spoof) {
  for (Emotion expert : kAllEmotions)
    for (Emotion emotion : kAllEmotions) {
      bool own = expert == emotion;
      Params(expert, emotion, Label::kBonafide) =
          own ? specialist_bonafide : off_bonafide;
      Params(expert, emotion, Label::kSpoof) = own ? specialist_spoof : off_spoof;
    }
}

void SimConfig::Validate() const {
  for (const auto &per_expert : score_params)
    for (const auto &per_emotion : per_expert)
      for (const GaussianParams &g : per_emotion)
        if (!std::isfinite(g.mean) || !(g.stddev > 0.0) || !std::isfinite(g.stddev))
          throw ConfigError(StrCat("simulated score std must be > 0 (got ",
                                   g.stddev, ")"));
  if (trials_per_cell < 1) throw ConfigError("trials_per_cell must be >= 1");
  if (!(gate_logit_gap >= 0.0))
    throw ConfigError(StrCat("gate_logit_gap must be >= 0, got ", gate_logit_gap));
  if (!(gate_logit_noise >= 0.0))
    throw ConfigError("gate_logit_noise must be >= 0");
  if (spoof_system.empty() || spoof_system == kBonafideSystem)
    throw ConfigError("spoof_system must be a non-empty name other than 'bonafide'");
  if (sample_rate <= 0) throw ConfigError("sample_rate must be positive");
  if (!(utterance_seconds > 0.0)) throw ConfigError("utterance length must be > 0");
  if (utterances_per_cell < 1) throw ConfigError("utterances_per_cell must be >= 1");
  if (num_speakers < 1) throw ConfigError("num_speakers must be >= 1");
  if (!(noise_level >= 0.0) || !(artifact_level >= 0.0))
    throw ConfigError("noise and artifact levels must be >= 0");
  const double nyquist = sample_rate / 2.0;
  for (int i = 0; i < kNumEmotions; ++i) {
    auto [lo, hi] = emotion_bands[i];
    if (!(lo > 0.0) || !(hi > lo) || hi >= nyquist)
      throw ConfigError(StrCat("bad tone band for ",
                               EmotionName(static_cast<Emotion>(i)), ": ", lo,
                               "-", hi, " Hz"));
    if (ArtifactHz(static_cast<Emotion>(i)) >= nyquist)
      throw ConfigError("sample rate too low for the artifact tones");
    for (int j = 0; j < i; ++j) {
      auto [lo2, hi2] = emotion_bands[j];
      if (lo < hi2 && lo2 < hi)
        throw ConfigError(StrCat("tone bands of ", EmotionName(static_cast<Emotion>(j)),
                                 " and ", EmotionName(static_cast<Emotion>(i)),
                                 " overlap"));
    }
  }
}

std::vector<std::string> SimConfig::KnownKeys(const std::string &p) {
  std::vector<std::string> keys = {
      p + "trials_per_cell", p + "gate_logit_gap", p + "gate_logit_noise",
      p + "spoof_system", p + "corpus.utterances_per_cell", p + "corpus.seconds",
      p + "corpus.noise", p + "corpus.artifact", p + "corpus.speakers",
      p + "corpus.sample_rate", p + "model-*"};
  for (const char *group : {"specialist", "off"})
    for (const char *label : {"bonafide", "spoof"})
      for (const char *field : {"mean", "std"})
        keys.push_back(StrCat(p, group, ".", label, ".", field));
  for (Emotion e : kAllEmotions)
    keys.push_back(StrCat(p, "corpus.band.", EmotionName(e)));
  return keys;
}

SimConfig SimConfig::FromConfig(const KeyValueConfig &c, const std::string &p) {
  SimConfig s;
  auto read = [&](const std::string &group, const char *label, GaussianParams def) {
    def.mean = c.GetDouble(StrCat(p, group, ".", label, ".mean"), def.mean);
    def.stddev = c.GetDouble(StrCat(p, group, ".", label, ".std"), def.stddev);
    return def;
  };
  const GaussianParams sb = read("specialist", "bonafide", s.Params(Emotion::kNeutral, Emotion::kNeutral, Label::kBonafide));
  const GaussianParams ss = read("specialist", "spoof", s.Params(Emotion::kNeutral, Emotion::kNeutral, Label::kSpoof));
  const GaussianParams ob = read("off", "bonafide", s.Params(Emotion::kNeutral, Emotion::kHappy, Label::kBonafide));
  const GaussianParams os = read("off", "spoof", s.Params(Emotion::kNeutral, Emotion::kHappy, Label::kSpoof));
  s.SetScoreParams(sb, ss, ob, os);
  // Per-cell overrides: <prefix>model-h.sad.spoof.mean and friends.
  for (Emotion expert : kAllEmotions)
    for (Emotion emotion : kAllEmotions)
      for (Label label : kLabels) {
        std::string group = StrCat(SpecialistTag(expert), ".", EmotionName(emotion));
        std::string name(LabelName(label));
        s.Params(expert, emotion, label) =
            read(group, name.c_str(), s.Params(expert, emotion, label));
      }
  s.trials_per_cell = c.GetUint(p + "trials_per_cell", s.trials_per_cell);
  s.gate_logit_gap = c.GetDouble(p + "gate_logit_gap", s.gate_logit_gap);
  s.gate_logit_noise = c.GetDouble(p + "gate_logit_noise", s.gate_logit_noise);
  s.spoof_system = ToLower(c.GetString(p + "spoof_system", s.spoof_system));
  s.utterances_per_cell =
      c.GetUint(p + "corpus.utterances_per_cell", s.utterances_per_cell);
  s.utterance_seconds = c.GetDouble(p + "corpus.seconds", s.utterance_seconds);
  s.noise_level = c.GetDouble(p + "corpus.noise", s.noise_level);
  s.artifact_level = c.GetDouble(p + "corpus.artifact", s.artifact_level);
  s.num_speakers = static_cast<int>(c.GetInt(p + "corpus.speakers", s.num_speakers));
  s.sample_rate = static_cast<int>(c.GetInt(p + "corpus.sample_rate", s.sample_rate));
  for (Emotion e : kAllEmotions) {
    std::string key = StrCat(p, "corpus.band.", EmotionName(e));
    std::vector<std::string> band = c.GetList(key);
    if (band.empty()) continue;
    auto lo = band.size() == 2 ? ParseFiniteDouble(band[0]) : std::nullopt;
    auto hi = band.size() == 2 ? ParseFiniteDouble(band[1]) : std::nullopt;
    if (!lo || !hi) throw ConfigError(StrCat("key '", key, "' expects 'low,high'"));
    s.emotion_bands[Index(e)] = {*lo, *hi};
  }
  s.Validate();
  return s;
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double AnalyticGaussianEer(GaussianParams bonafide, GaussianParams spoof) {
  return 100.0 * NormalCdf(-(bonafide.mean - spoof.mean) /
                           (bonafide.stddev + spoof.stddev));
}

ScoreTable SyntheticBatch::ExpertTable(Emotion expert) const {
  ScoreTable table;
  for (const ScoredTrial &t : expert_scores[Index(expert)])
    table.emplace(t.utt_id, t.score);
  return table;
}

LogitsTable SyntheticBatch::Logits() const {
  LogitsTable table;
  for (size_t n = 0; n < trials.size(); ++n)
    table.emplace(trials.records()[n].utt_id, logits[n]);
  return table;
}

SyntheticBatch GenerateScores(const SimConfig &config) {
  config.Validate();
  const size_t n = config.trials_per_cell;
  std::vector<TrialRecord> records;
  records.reserve(kNumEmotions * 2 * n);
  for (Emotion e : kAllEmotions)
    for (Label l : kLabels)
      for (size_t k = 0; k < n; ++k) {
        TrialRecord r;
        r.utt_id = UttId(e, l, k);
        r.speaker_id = SpeakerId(config, k);
        r.emotion = e;
        r.label = l;
        r.source_system = l == Label::kBonafide ? std::string(kBonafideSystem)
                                                : config.spoof_system;
        records.push_back(std::move(r));
      }

  SyntheticBatch batch;
  batch.truth = config;
  for (Emotion expert : kAllEmotions) {
    auto &rows = batch.expert_scores[Index(expert)];
    rows.reserve(records.size());
    size_t pos = 0;
    for (Emotion e : kAllEmotions)
      for (Label l : kLabels) {
        Rng rng(DeriveSeed(config.seed,
                           {kScoreStream, std::uint64_t(Index(expert)),
                            std::uint64_t(Index(e)), std::uint64_t(l)}));
        const GaussianParams &g = config.Params(expert, e, l);
        for (size_t k = 0; k < n; ++k, ++pos) {
          const TrialRecord &r = records[pos];
          rows.push_back({r.utt_id, rng.Gaussian(g.mean, g.stddev), l, e,
                          r.source_system});
        }
      }
  }

  batch.logits.reserve(records.size());
  for (Emotion e : kAllEmotions)
    for (Label l : kLabels) {
      Rng rng(DeriveSeed(config.seed, {kLogitStream, std::uint64_t(Index(e)),
                                       std::uint64_t(l)}));
      for (size_t k = 0; k < n; ++k) {
        EmotionLogits z;
        z.z[Index(e)] = config.gate_logit_gap;
        if (config.gate_logit_noise > 0.0)
          for (double &v : z.z) v += config.gate_logit_noise * rng.Gaussian();
        batch.logits.push_back(z);
      }
    }
  batch.trials = Manifest(std::move(records), "simulated");
  return batch;
}

double ClampToUnitInterval(double score) {
  return std::clamp(score, 1e-9, 1.0 - 1e-9);
}

Waveform SynthesizeUtterance(const SimConfig &c, Emotion emotion, Label label,
                             size_t index) {
  Rng rng(DeriveSeed(c.seed, {kAudioStream, std::uint64_t(Index(emotion)),
                              std::uint64_t(label), index}));
  Waveform wave;
  wave.sample_rate = c.sample_rate;
  const size_t length =
      static_cast<size_t>(std::lround(c.utterance_seconds * c.sample_rate));
  wave.samples.assign(std::max<size_t>(length, 1), 0.0);

  constexpr int kTones = 3;
  const auto [lo, hi] = c.emotion_bands[Index(emotion)];
  const double two_pi = 2.0 * std::numbers::pi;
  for (int k = 0; k < kTones; ++k) {
    double freq = lo + (hi - lo) * rng.Uniform();
    double amp = 0.1 + 0.15 * rng.Uniform();
    double phase = two_pi * rng.Uniform();
    for (size_t t = 0; t < wave.samples.size(); ++t)
      wave.samples[t] += amp * std::sin(two_pi * freq * t / c.sample_rate + phase);
  }
  // Drawn for both labels so bona fide and spoof streams stay aligned.
  const double artifact_amp = c.artifact_level * (0.25 + 0.75 * rng.Uniform());
  const double artifact_phase = two_pi * rng.Uniform();
  if (label == Label::kSpoof) {
    const double freq = ArtifactHz(emotion);
    for (size_t t = 0; t < wave.samples.size(); ++t)
      wave.samples[t] +=
          artifact_amp * std::sin(two_pi * freq * t / c.sample_rate + artifact_phase);
  }
  if (c.noise_level > 0.0)
    for (double &s : wave.samples) s += c.noise_level * rng.Gaussian();
  for (double &s : wave.samples) s = std::clamp(s, -1.0, 1.0);
  return wave;
}

Manifest GenerateCorpus(const SimConfig &config, const fs::path &out_dir,
                        int jobs) {
  config.Validate();
  struct Item {
    Emotion emotion;
    Label label;
    size_t index;
  };
  std::vector<Item> items;
  for (Emotion e : kAllEmotions)
    for (Label l : kLabels)
      for (size_t k = 0; k < config.utterances_per_cell; ++k)
        items.push_back({e, l, k});

  std::vector<TrialRecord> records(items.size());
  ParallelFor(items.size(), jobs, [&](size_t i) {
    const Item &it = items[i];
    TrialRecord r;
    r.utt_id = UttId(it.emotion, it.label, it.index);
    r.speaker_id = SpeakerId(config, it.index);
    r.emotion = it.emotion;
    r.label = it.label;
    r.source_system = it.label == Label::kBonafide
                          ? std::string(kBonafideSystem)
                          : config.spoof_system;
    r.audio_path = "wav/" + r.utt_id + ".wav";
    Waveform wave = SynthesizeUtterance(config, it.emotion, it.label, it.index);
    r.duration_s = wave.DurationSeconds();
    WriteWav(wave, out_dir / r.audio_path);
    records[i] = std::move(r);
  });
  Manifest manifest(std::move(records), (out_dir / "manifest.csv").string());
  WriteManifest(manifest, out_dir / "manifest.csv");
  return manifest;
}

}  // namespace gem
