// features/wave-io.cc

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

#include "features/wave-io.h"

#include <cmath>
#include <cstdint>
#include <cstring>

#include "base/gem-common.h"
#include "base/text-utils.h"

namespace gem {

using internal::StrCat;

namespace {

std::uint32_t ReadU32(const std::string &b, size_t pos) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[pos + 3])) << 24;
}

std::uint16_t ReadU16(const std::string &b, size_t pos) {
  return static_cast<std::uint16_t>(
      static_cast<unsigned char>(b[pos]) |
      static_cast<unsigned char>(b[pos + 1]) << 8);
}

void PutU32(std::string *b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b->push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void PutU16(std::string *b, std::uint16_t v) {
  b->push_back(static_cast<char>(v & 0xff));
  b->push_back(static_cast<char>((v >> 8) & 0xff));
}

}  // namespace

void ValidateWaveform(const Waveform &wave) {
  if (wave.samples.empty()) throw InputError("waveform has no samples");
  if (wave.sample_rate <= 0)
    throw InputError(StrCat("bad sample rate ", wave.sample_rate));
  for (size_t i = 0; i < wave.samples.size(); ++i) {
    double s = wave.samples[i];
    if (!std::isfinite(s) || std::abs(s) > 1.0 + 1e-6)
      throw InputError(StrCat("sample ", i, " out of range: ", s));
  }
}

Waveform ParseWav(const std::string &b, const std::string &src) {
  if (b.size() < 12 || b.compare(0, 4, "RIFF") != 0 ||
      b.compare(8, 4, "WAVE") != 0)
    throw FormatError(StrCat(src, ": not a RIFF/WAVE file"));

  bool have_fmt = false;
  int channels = 0, bits = 0, sample_rate = 0;
  size_t pos = 12;
  while (pos + 8 <= b.size()) {
    std::string id = b.substr(pos, 4);
    std::uint32_t size = ReadU32(b, pos + 4);
    size_t body = pos + 8;
    if (id == "fmt ") {
      if (size < 16 || body + 16 > b.size())
        throw FormatError(StrCat(src, ": truncated fmt chunk"));
      std::uint16_t format = ReadU16(b, body);
      channels = ReadU16(b, body + 2);
      sample_rate = static_cast<int>(ReadU32(b, body + 4));
      bits = ReadU16(b, body + 14);
      if (format != 1)
        throw FormatError(StrCat(src, ": compressed or non-PCM audio (format=",
                                 format, ")"));
      if (channels != 1)
        throw FormatError(StrCat(src, ": channels=", channels));
      if (bits != 16)
        throw FormatError(StrCat(src, ": bits_per_sample=", bits));
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt)
        throw FormatError(StrCat(src, ": data chunk before fmt chunk"));
      if (body + size > b.size())
        throw FormatError(StrCat(src, ": truncated data chunk (declared ", size,
                                 " bytes, found ", b.size() - body, ")"));
      if (size % 2 != 0)
        throw FormatError(StrCat(src, ": truncated data chunk (odd byte count)"));
      Waveform wave;
      wave.sample_rate = sample_rate;
      wave.samples.resize(size / 2);
      for (size_t i = 0; i < wave.samples.size(); ++i) {
        auto v = static_cast<std::int16_t>(ReadU16(b, body + 2 * i));
        wave.samples[i] = v / 32768.0;
      }
      return wave;
    }
    // Chunks are word-aligned.
    pos = body + size + (size & 1);
  }
  throw FormatError(StrCat(src, have_fmt ? ": missing data chunk"
                                         : ": missing fmt chunk"));
}

Waveform ReadWav(const std::filesystem::path &path) {
  return ParseWav(ReadFileToString(path), path.string());
}

std::string EncodeWav(const Waveform &wave) {
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(wave.samples.size() * 2);
  std::string b;
  b.reserve(44 + data_bytes);
  b += "RIFF";
  PutU32(&b, 36 + data_bytes);
  b += "WAVE";
  b += "fmt ";
  PutU32(&b, 16);
  PutU16(&b, 1);  // PCM
  PutU16(&b, 1);  // mono
  PutU32(&b, static_cast<std::uint32_t>(wave.sample_rate));
  PutU32(&b, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  PutU16(&b, 2);
  PutU16(&b, 16);
  b += "data";
  PutU32(&b, data_bytes);
  for (double s : wave.samples) {
    double scaled = std::nearbyint(s * 32768.0);
    if (scaled > 32767.0) scaled = 32767.0;
    if (scaled < -32768.0) scaled = -32768.0;
    PutU16(&b, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
  return b;
}

void WriteWav(const Waveform &wave, const std::filesystem::path &path) {
  WriteFileAtomic(path, EncodeWav(wave));
}

}  // namespace gem
