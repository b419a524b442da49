// features/feature-extractor.cc

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

#include "features/feature-extractor.h"

#include <cmath>
#include <numbers>

#include "base/gem-common.h"
#include "base/text-utils.h"
#include "features/fft.h"

namespace gem {

namespace fs = std::filesystem;
using internal::StrCat;

size_t FeatureConfig::FrameLength(int sample_rate) const {
  return static_cast<size_t>(std::lround(sample_rate * frame_len_ms / 1000.0));
}

size_t FeatureConfig::FrameShift(int sample_rate) const {
  return static_cast<size_t>(std::lround(sample_rate * hop_ms / 1000.0));
}

void FeatureConfig::Validate(int sample_rate) const {
  if (n_bands < 1) throw ConfigError(StrCat("n_bands must be >= 1, got ", n_bands));
  if (!(floor_eps > 0.0))
    throw ConfigError(StrCat("floor_eps must be > 0, got ", floor_eps));
  if (FrameLength(sample_rate) < 1)
    throw ConfigError(StrCat("frame_len_ms too small: ", frame_len_ms));
  if (FrameShift(sample_rate) < 1)
    throw ConfigError(StrCat("hop_ms too small: ", hop_ms));
  if (!IsPowerOfTwo(fft_size))
    throw ConfigError(StrCat("fft_size must be a power of two, got ", fft_size));
  if (fft_size < FrameLength(sample_rate))
    throw ConfigError(StrCat("fft_size ", fft_size, " is shorter than the frame (",
                             FrameLength(sample_rate), " samples)"));
}

FeatureConfig FeatureConfig::FromConfig(const KeyValueConfig &c,
                                        const std::string &prefix) {
  FeatureConfig f;
  f.frame_len_ms = c.GetDouble(prefix + "frame_len_ms", f.frame_len_ms);
  f.hop_ms = c.GetDouble(prefix + "hop_ms", f.hop_ms);
  f.fft_size = c.GetUint(prefix + "fft_size", f.fft_size);
  f.n_bands = static_cast<int>(c.GetInt(prefix + "n_bands", f.n_bands));
  f.floor_eps = c.GetDouble(prefix + "floor_eps", f.floor_eps);
  return f;
}

double MelFilterbank::HzToMel(double hz) {
  return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double MelFilterbank::MelToHz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank::MelFilterbank(const FeatureConfig &config, int sample_rate) {
  const int n = config.n_bands;
  const double nyquist = sample_rate / 2.0;
  const double mel_max = HzToMel(nyquist);
  std::vector<double> edges(n + 2);
  for (int i = 0; i < n + 2; ++i) edges[i] = MelToHz(mel_max * i / (n + 1));

  const size_t num_bins = config.fft_size / 2 + 1;
  const double bin_hz = static_cast<double>(sample_rate) / config.fft_size;
  first_bin_.resize(n);
  weights_.resize(n);
  centers_hz_.resize(n);
  for (int b = 0; b < n; ++b) {
    const double lo = edges[b], mid = edges[b + 1], hi = edges[b + 2];
    centers_hz_[b] = mid;
    first_bin_[b] = num_bins;
    for (size_t k = 0; k < num_bins; ++k) {
      double f = k * bin_hz;
      double w = 0.0;
      if (f > lo && f <= mid) w = (f - lo) / (mid - lo);
      else if (f > mid && f < hi) w = (hi - f) / (hi - mid);
      if (w <= 0.0) {
        if (first_bin_[b] != num_bins) break;
        continue;
      }
      if (first_bin_[b] == num_bins) first_bin_[b] = k;
      weights_[b].push_back(w);
    }
    if (weights_[b].empty())
      throw ConfigError(StrCat("filterbank band ", b, " (", lo, "-", hi,
                               " Hz) covers no FFT bin; use fewer bands or a "
                               "larger fft_size"));
  }
}

std::vector<double> MelFilterbank::Apply(std::span<const double> power) const {
  std::vector<double> energies(weights_.size(), 0.0);
  for (size_t b = 0; b < weights_.size(); ++b) {
    double sum = 0.0;
    const auto &w = weights_[b];
    for (size_t j = 0; j < w.size(); ++j) sum += w[j] * power[first_bin_[b] + j];
    energies[b] = sum;
  }
  return energies;
}

std::vector<double> HammingWindow(size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2) return w;
  for (size_t i = 0; i < length; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (length - 1));
  return w;
}

std::vector<std::vector<double>> LogBandEnergies(const Waveform &wave,
                                                 const FeatureConfig &config) {
  ValidateWaveform(wave);
  config.Validate(wave.sample_rate);
  const size_t frame_len = config.FrameLength(wave.sample_rate);
  const size_t shift = config.FrameShift(wave.sample_rate);
  if (wave.samples.size() < frame_len)
    throw InputError(StrCat("waveform of ", wave.samples.size(),
                            " samples is shorter than one frame (", frame_len,
                            ")"));
  const size_t num_frames = 1 + (wave.samples.size() - frame_len) / shift;

  const std::vector<double> window = HammingWindow(frame_len);
  const MelFilterbank fbank(config, wave.sample_rate);
  std::vector<std::vector<double>> out(num_frames);
  std::vector<double> frame(frame_len);
  for (size_t t = 0; t < num_frames; ++t) {
    const double *src = wave.samples.data() + t * shift;
    for (size_t i = 0; i < frame_len; ++i) frame[i] = src[i] * window[i];
    std::vector<double> energies = fbank.Apply(PowerSpectrum(frame, config.fft_size));
    for (double &e : energies) e = std::log(e + config.floor_eps);
    out[t] = std::move(energies);
  }
  return out;
}

FeatureVector Extract(const Waveform &wave, const FeatureConfig &config) {
  const auto frames = LogBandEnergies(wave, config);
  const size_t bands = static_cast<size_t>(config.n_bands);
  const double n = static_cast<double>(frames.size());
  FeatureVector fv;
  fv.values.assign(2 * bands, 0.0);
  for (size_t b = 0; b < bands; ++b) {
    // Shifted by the first frame's value: a constant band yields exactly
    // that constant as its mean and exactly zero spread.
    const double anchor = frames[0][b];
    double sum = 0.0, sum_sq = 0.0;
    for (const auto &f : frames) {
      double d = f[b] - anchor;
      sum += d;
      sum_sq += d * d;
    }
    double mean_dev = sum / n;
    double var = sum_sq / n - mean_dev * mean_dev;
    fv.values[b] = anchor + mean_dev;
    fv.values[bands + b] = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return fv;
}

void FeatureTable::Add(const std::string &utt_id, FeatureVector features) {
  if (!rows_.empty() && features.dim() != rows_.front().dim())
    throw ValidationError(StrCat("feature dimension ", features.dim(), " for ",
                                 utt_id, " differs from ", rows_.front().dim()));
  if (!index_.emplace(utt_id, ids_.size()).second)
    throw ValidationError(StrCat("duplicate utt_id ", utt_id, " in feature table"));
  ids_.push_back(utt_id);
  rows_.push_back(std::move(features));
}

const FeatureVector *FeatureTable::Find(const std::string &utt_id) const {
  auto it = index_.find(utt_id);
  return it == index_.end() ? nullptr : &rows_[it->second];
}

const FeatureVector &FeatureTable::Get(const std::string &utt_id) const {
  const FeatureVector *fv = Find(utt_id);
  if (!fv) throw ValidationError(StrCat("no features for utterance ", utt_id));
  return *fv;
}

std::string FormatFeatureTable(const FeatureTable &table) {
  std::string out;
  for (size_t i = 0; i < table.size(); ++i) {
    out += table.ids()[i];
    for (double v : table.rows()[i].values) {
      out += '\t';
      out += FormatReal(v, 9);
    }
    out += '\n';
  }
  return out;
}

void WriteFeatureTable(const FeatureTable &table, const fs::path &path) {
  WriteFileAtomic(path, FormatFeatureTable(table));
}

FeatureTable ReadFeatureTable(const fs::path &path) {
  FeatureTable table;
  std::vector<std::string> lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> f = SplitString(lines[i], '\t');
    if (f.size() < 2)
      throw FormatError(StrCat(path.string(), ":", i + 1, ": no feature values"));
    FeatureVector fv;
    for (size_t j = 1; j < f.size(); ++j) {
      auto v = ParseFiniteDouble(f[j]);
      if (!v)
        throw FormatError(StrCat(path.string(), ":", i + 1, ": bad value '",
                                 f[j], "'"));
      fv.values.push_back(*v);
    }
    try {
      table.Add(f[0], std::move(fv));
    } catch (const ValidationError &e) {
      throw ValidationError(StrCat(path.string(), ":", i + 1, ": ", e.what()));
    }
  }
  return table;
}

FeatureNormalizer FeatureNormalizer::Fit(
    const std::vector<const FeatureVector *> &rows) {
  if (rows.empty()) throw InputError("cannot fit a normalizer on zero rows");
  const size_t dim = rows.front()->dim();
  FeatureNormalizer norm;
  norm.mean.assign(dim, 0.0);
  norm.stddev.assign(dim, 0.0);
  for (const FeatureVector *r : rows) {
    if (r->dim() != dim) throw InputError("inconsistent feature dimensions");
    for (size_t d = 0; d < dim; ++d) norm.mean[d] += r->values[d];
  }
  for (double &m : norm.mean) m /= rows.size();
  for (const FeatureVector *r : rows)
    for (size_t d = 0; d < dim; ++d) {
      double diff = r->values[d] - norm.mean[d];
      norm.stddev[d] += diff * diff;
    }
  for (double &s : norm.stddev) s = std::sqrt(s / rows.size());
  return norm;
}

FeatureVector FeatureNormalizer::Apply(const FeatureVector &x) const {
  if (x.dim() != mean.size())
    throw InputError(StrCat("normalizer dimension ", mean.size(),
                            " does not match feature dimension ", x.dim()));
  FeatureVector out;
  out.values.resize(x.dim());
  for (size_t d = 0; d < x.dim(); ++d) {
    double centred = x.values[d] - mean[d];
    out.values[d] = stddev[d] > 0.0 ? centred / stddev[d] : centred;
  }
  return out;
}

std::string FormatNormalizer(const FeatureNormalizer &norm) {
  std::string out = "normalizer\n" + std::to_string(norm.mean.size()) + "\n";
  for (size_t d = 0; d < norm.mean.size(); ++d)
    out += FormatReal(norm.mean[d], 17) + " " + FormatReal(norm.stddev[d], 17) + "\n";
  return out;
}

FeatureNormalizer ParseNormalizer(const std::string &text,
                                  const std::string &src) {
  std::vector<std::string> lines = SplitString(text, '\n');
  if (lines.size() < 2 || Trim(lines[0]) != "normalizer")
    throw FormatError(StrCat(src, ": not a normalizer file"));
  auto dim = ParseUint(lines[1]);
  if (!dim) throw FormatError(StrCat(src, ":2: bad dimension"));
  if (lines.size() < *dim + 2)
    throw FormatError(StrCat(src, ": expected ", *dim, " rows"));
  FeatureNormalizer norm;
  for (size_t d = 0; d < *dim; ++d) {
    std::vector<std::string> f = SplitString(Trim(lines[d + 2]), ' ');
    auto m = f.size() == 2 ? ParseFiniteDouble(f[0]) : std::nullopt;
    auto s = f.size() == 2 ? ParseFiniteDouble(f[1]) : std::nullopt;
    if (!m || !s || *s < 0.0)
      throw FormatError(StrCat(src, ":", d + 3, ": expected 'mean stddev'"));
    norm.mean.push_back(*m);
    norm.stddev.push_back(*s);
  }
  return norm;
}

}  // namespace gem
