// features/feature-extractor.h

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

#ifndef GEM_FEATURES_FEATURE_EXTRACTOR_H_
#define GEM_FEATURES_FEATURE_EXTRACTOR_H_

#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "base/kv-config.h"
#include "features/wave-io.h"

namespace gem {

struct FeatureConfig {
  double frame_len_ms = 25.0;
  double hop_ms = 10.0;
  size_t fft_size = 512;
  int n_bands = 24;
  double floor_eps = 1e-10;

  size_t FrameLength(int sample_rate) const;
  size_t FrameShift(int sample_rate) const;

  /// Output dimension: per-band mean followed by per-band std.
  size_t Dim() const { return 2 * static_cast<size_t>(n_bands); }

  /// Throws ConfigError unless fft_size is a power of two no smaller than
  /// the frame, n_bands >= 1, floor_eps > 0 and the hop is positive.
  void Validate(int sample_rate) const;

  /// Reads "<prefix>frame_len_ms" etc., keeping defaults for absent keys.
  static FeatureConfig FromConfig(const KeyValueConfig &config,
                                  const std::string &prefix);
};

/// Fixed-dimension utterance summary: mean log band energy for each band,
/// then the standard deviation of the same quantity across frames.
struct FeatureVector {
  std::vector<double> values;

  size_t dim() const { return values.size(); }
  std::span<const double> span() const { return values; }
  bool operator==(const FeatureVector &) const = default;
};

/// Triangular filters on a mel-warped axis (2595 log10(1 + f/700)) with
/// n_bands + 2 equally spaced edge points from 0 Hz to Nyquist.  Weights
/// are evaluated at each FFT bin's exact frequency.
class MelFilterbank {
 public:
  MelFilterbank(const FeatureConfig &config, int sample_rate);

  /// Centre frequency of band `b` in Hz.
  double CenterHz(int band) const { return centers_hz_[band]; }
  int NumBands() const { return static_cast<int>(weights_.size()); }

  /// Band energies for a one-sided power spectrum of fft_size/2 + 1 bins.
  std::vector<double> Apply(std::span<const double> power) const;

  static double HzToMel(double hz);
  static double MelToHz(double mel);

 private:
  // Per band: first nonzero bin and the run of weights starting there.
  std::vector<size_t> first_bin_;
  std::vector<std::vector<double>> weights_;
  std::vector<double> centers_hz_;
};

/// Hamming window coefficients 0.54 - 0.46 cos(2 pi n / (L - 1)).
std::vector<double> HammingWindow(size_t length);

/// Per-frame log band energies, frames x n_bands.  The last partial frame
/// is dropped.  InputError when the waveform is shorter than one frame.
std::vector<std::vector<double>> LogBandEnergies(const Waveform &wave,
                                                 const FeatureConfig &config);

/// Frames the signal, applies the window, takes the power spectrum, the
/// filterbank and log(x + floor_eps), then pools mean and std per band.
FeatureVector Extract(const Waveform &wave, const FeatureConfig &config);

/// utt_id -> features, kept in insertion order.
class FeatureTable {
 public:
  void Add(const std::string &utt_id, FeatureVector features);
  const FeatureVector *Find(const std::string &utt_id) const;
  /// Throws ValidationError naming the id when absent.
  const FeatureVector &Get(const std::string &utt_id) const;

  size_t size() const { return ids_.size(); }
  size_t dim() const { return rows_.empty() ? 0 : rows_.front().dim(); }
  const std::vector<std::string> &ids() const { return ids_; }
  const std::vector<FeatureVector> &rows() const { return rows_; }
  std::vector<FeatureVector> &mutable_rows() { return rows_; }

 private:
  std::vector<std::string> ids_;
  std::vector<FeatureVector> rows_;
  std::unordered_map<std::string, size_t> index_;
};

/// `utt_id<TAB>v1<TAB>...<TAB>vD` lines, reals with 9 significant digits.
std::string FormatFeatureTable(const FeatureTable &table);
void WriteFeatureTable(const FeatureTable &table,
                       const std::filesystem::path &path);
FeatureTable ReadFeatureTable(const std::filesystem::path &path);

/// Per-dimension standardisation (x - mean) / std.  Dimensions with zero
/// spread are only centred.
struct FeatureNormalizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  static FeatureNormalizer Fit(const std::vector<const FeatureVector *> &rows);
  FeatureVector Apply(const FeatureVector &x) const;
};

std::string FormatNormalizer(const FeatureNormalizer &norm);
FeatureNormalizer ParseNormalizer(const std::string &text,
                                  const std::string &source_name);

}  // namespace gem

#endif  // GEM_FEATURES_FEATURE_EXTRACTOR_H_
