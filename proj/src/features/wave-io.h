// features/wave-io.h

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

#ifndef GEM_FEATURES_WAVE_IO_H_
#define GEM_FEATURES_WAVE_IO_H_

#include <filesystem>
#include <string>
#include <vector>

namespace gem {

/// Mono audio scaled to [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;

  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
};

/// Throws InputError if the waveform is empty, has a non-finite sample or a
/// sample with magnitude above 1 + 1e-6.
void ValidateWaveform(const Waveform &wave);

/// Parses a RIFF/WAVE byte buffer holding 16-bit mono PCM.  Samples are
/// divided by 32768.  Anything else (stereo, 8/24/32-bit, compressed,
/// truncated) raises FormatError naming the offending property, e.g.
/// "channels=2".
Waveform ParseWav(const std::string &bytes, const std::string &source_name);
Waveform ReadWav(const std::filesystem::path &path);

/// Serialises as 16-bit mono PCM.  Samples are scaled by 32768, rounded and
/// clipped to the int16 range.
std::string EncodeWav(const Waveform &wave);
void WriteWav(const Waveform &wave, const std::filesystem::path &path);

}  // namespace gem

#endif  // GEM_FEATURES_WAVE_IO_H_
