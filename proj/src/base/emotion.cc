// base/emotion.cc

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

#include "base/emotion.h"

#include "base/text-utils.h"

namespace gem {

std::string_view EmotionName(Emotion e) {
  switch (e) {
    case Emotion::kNeutral: return "neutral";
    case Emotion::kHappy: return "happy";
    case Emotion::kAngry: return "angry";
    case Emotion::kSad: return "sad";
  }
  return "?";
}

std::string_view EmotionTitle(Emotion e) {
  switch (e) {
    case Emotion::kNeutral: return "Neutral";
    case Emotion::kHappy: return "Happy";
    case Emotion::kAngry: return "Angry";
    case Emotion::kSad: return "Sad";
  }
  return "?";
}

std::optional<Emotion> ParseEmotion(std::string_view s) {
  std::string lower = ToLower(Trim(s));
  if (lower == "neutral") return Emotion::kNeutral;
  if (lower == "happy" || lower == "happiness") return Emotion::kHappy;
  if (lower == "angry" || lower == "anger") return Emotion::kAngry;
  if (lower == "sad" || lower == "sadness") return Emotion::kSad;
  return std::nullopt;
}

std::string SpecialistTag(Emotion e) {
  return std::string("model-") + EmotionName(e).front();
}

std::string_view LabelName(Label l) {
  return l == Label::kBonafide ? "bonafide" : "spoof";
}

std::optional<Label> ParseLabel(std::string_view s) {
  std::string lower = ToLower(Trim(s));
  if (lower == "bonafide" || lower == "bona-fide") return Label::kBonafide;
  if (lower == "spoof") return Label::kSpoof;
  return std::nullopt;
}

}  // namespace gem
