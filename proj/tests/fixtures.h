// tests/fixtures.h

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

#ifndef GEM_TESTS_FIXTURES_H_
#define GEM_TESTS_FIXTURES_H_

#include <cstdio>
#include <string>
#include <vector>

#include "base/emotion.h"
#include "manifest/manifest.h"

namespace gem::testing {

/// 1 speaker x 4 emotions x {bonafide, sysA, sysB}: 12 rows, 4 bonafide.
inline std::string TwelveRowCsv() {
  std::string csv = std::string(kManifestHeader) + "\n";
  int n = 0;
  for (const char *emo : {"neutral", "happy", "angry", "sad"})
    for (const char *sys : {"bonafide", "sysA", "sysB"}) {
      std::string label = std::string(sys) == "bonafide" ? "bonafide" : "spoof";
      csv += "u" + std::to_string(n++) + ",spk1," + emo + "," + label + "," + sys +
             ",,\n";
    }
  return csv;
}

/// Speakers 0011..0020.
inline std::string SpeakerName(int k) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%04d", 11 + k);
  return buf;
}

/// The full corpus layout: 10 speakers x 4 emotions x {bonafide + 3
/// systems} x 300 utterances.
inline Manifest FullLayoutManifest() {
  std::vector<TrialRecord> records;
  records.reserve(10 * 4 * 4 * 300);
  const char *systems[] = {"bonafide", "cosyvoice", "f5tts", "styletts2"};
  for (int spk = 0; spk < 10; ++spk)
    for (Emotion e : kAllEmotions)
      for (const char *sys : systems)
        for (int i = 0; i < 300; ++i) {
          TrialRecord r;
          r.speaker_id = SpeakerName(spk);
          r.emotion = e;
          r.source_system = sys;
          r.label = r.source_system == kBonafideSystem ? Label::kBonafide
                                                       : Label::kSpoof;
          r.utt_id = r.speaker_id + "_" + std::string(EmotionName(e)) + "_" +
                     sys + "_" + std::to_string(i);
          records.push_back(std::move(r));
        }
  return Manifest(std::move(records), "full-layout");
}

/// 4 / 2 / 4 speakers, one TTS system per split.
inline SplitSpec PaperSplitSpec() {
  SplitSpec s;
  for (int k = 0; k < 4; ++k) s.train_speakers.insert(SpeakerName(k));
  for (int k = 4; k < 6; ++k) s.valid_speakers.insert(SpeakerName(k));
  for (int k = 6; k < 10; ++k) s.test_speakers.insert(SpeakerName(k));
  s.train_system = "cosyvoice";
  s.valid_system = "f5tts";
  s.test_system = "styletts2";
  return s;
}

}  // namespace gem::testing

#endif  // GEM_TESTS_FIXTURES_H_
