// features/wave-io-test.cc

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
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "test-util.h"

#include "base/gem-common.h"
#include "features/wave-io.h"

namespace gem {

namespace {

void Put16(std::string &s, std::uint16_t v) {
  s += static_cast<char>(v & 0xff);
  s += static_cast<char>(v >> 8);
}
void Put32(std::string &s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s += static_cast<char>((v >> (8 * i)) & 0xff);
}

// Hand-assembled RIFF header, independent of EncodeWav.
std::string MakeWav(const std::vector<std::int16_t> &samples, int channels = 1,
                    int bits = 16, int format = 1, int rate = 16000,
                    std::uint32_t declared_data = 0xffffffff) {
  std::string data;
  for (std::int16_t v : samples) Put16(data, static_cast<std::uint16_t>(v));
  std::uint32_t data_size = declared_data == 0xffffffff ? data.size() : declared_data;
  std::string s = "RIFF";
  Put32(s, 36 + data.size());
  s += "WAVEfmt ";
  Put32(s, 16);
  Put16(s, format);
  Put16(s, channels);
  Put32(s, rate);
  Put32(s, rate * channels * bits / 8);
  Put16(s, channels * bits / 8);
  Put16(s, bits);
  s += "data";
  Put32(s, data_size);
  return s + data;
}

std::string ErrorOf(const std::string &bytes) {
  try {
    ParseWav(bytes, "t.wav");
  } catch (const FormatError &e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("one second of silence") {
  Waveform w = ParseWav(MakeWav(std::vector<std::int16_t>(16000, 0)), "s.wav");
  CHECK(w.sample_rate == 16000);
  REQUIRE(w.samples.size() == 16000);
  for (double v : w.samples) CHECK(v == 0.0);
  CHECK(w.DurationSeconds() == 1.0);
}

TEST_CASE("scale boundary") {
  Waveform w = ParseWav(MakeWav({-32768}), "b.wav");
  REQUIRE(w.samples.size() == 1);
  CHECK(w.samples[0] == -1.0);
  Waveform v = ParseWav(MakeWav({32767, 16384}), "b.wav");
  CHECK(v.samples[0] == 32767.0 / 32768.0);
  CHECK(v.samples[1] == 0.5);
}

TEST_CASE("format errors name the property") {
  CHECK(ErrorOf(MakeWav({0, 0}, 2)).find("channels=2") != std::string::npos);
  CHECK(ErrorOf(MakeWav({0, 0}, 1, 8)).find("bits_per_sample=8") != std::string::npos);
  CHECK(ErrorOf(MakeWav({0, 0}, 1, 16, 3)).find("format=3") != std::string::npos);
  CHECK(ErrorOf(MakeWav({0, 0}, 1, 16, 1, 16000, 400)).find("truncated") !=
        std::string::npos);
  CHECK(ErrorOf("RIFX....").find("RIFF") != std::string::npos);
  CHECK_FALSE(ErrorOf(MakeWav({1, 2, 3})).size());
}

TEST_CASE("encode then parse round trips int16 grid values") {
  Waveform w;
  w.sample_rate = 8000;
  for (int i = -5; i <= 5; ++i) w.samples.push_back(i / 8.0);
  w.samples.push_back(1.0);  // clips to 32767
  Waveform back = ParseWav(EncodeWav(w), "r.wav");
  CHECK(back.sample_rate == 8000);
  REQUIRE(back.samples.size() == w.samples.size());
  for (size_t i = 0; i + 1 < w.samples.size(); ++i) CHECK(back.samples[i] == w.samples[i]);
  CHECK(back.samples.back() == 32767.0 / 32768.0);
  CHECK(EncodeWav(w) == EncodeWav(back) );

  testing::TempDir dir;
  WriteWav(w, dir / "x/y.wav");
  CHECK(ReadWav(dir / "x/y.wav").samples == back.samples);
  CHECK_THROWS(ReadWav(dir / "missing.wav"));
}

TEST_CASE("waveform validation") {
  Waveform w;
  CHECK_THROWS_AS(ValidateWaveform(w), InputError);
  w.samples = {0.0, 1.0 + 1e-7};
  CHECK_NOTHROW(ValidateWaveform(w));
  w.samples = {0.0, 1.01};
  CHECK_THROWS_AS(ValidateWaveform(w), InputError);
  w.samples = {std::nan("")};
  CHECK_THROWS_AS(ValidateWaveform(w), InputError);
}

}  // namespace gem
