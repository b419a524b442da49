// base/emotion.h

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

#ifndef GEM_BASE_EMOTION_H_
#define GEM_BASE_EMOTION_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace gem {

/// The four emotion classes.  The numeric values are the canonical index
/// order shared by the gating vector, the expert registry and every file
/// format that stores one column per emotion.
enum class Emotion : int { kNeutral = 0, kHappy = 1, kAngry = 2, kSad = 3 };

inline constexpr int kNumEmotions = 4;

inline constexpr std::array<Emotion, kNumEmotions> kAllEmotions = {
    Emotion::kNeutral, Emotion::kHappy, Emotion::kAngry, Emotion::kSad};

/// Happy, Angry, Sad: the pooled "emotional speech" subset.
inline constexpr std::array<Emotion, 3> kHasEmotions = {
    Emotion::kHappy, Emotion::kAngry, Emotion::kSad};

constexpr int Index(Emotion e) { return static_cast<int>(e); }

/// Lower-case canonical name ("neutral", "happy", ...).
std::string_view EmotionName(Emotion e);

/// Column title as printed in reports ("Neutral", "Happy", ...).
std::string_view EmotionTitle(Emotion e);

/// Case-insensitive; accepts "happiness", "anger", "sadness" as aliases.
std::optional<Emotion> ParseEmotion(std::string_view s);

/// Expert tag used for specialists, e.g. "model-h".
std::string SpecialistTag(Emotion e);

enum class Label : int { kBonafide = 0, kSpoof = 1 };

std::string_view LabelName(Label l);
std::optional<Label> ParseLabel(std::string_view s);

/// source_system value reserved for bona-fide speech.
inline constexpr std::string_view kBonafideSystem = "bonafide";

}  // namespace gem

#endif  // GEM_BASE_EMOTION_H_
