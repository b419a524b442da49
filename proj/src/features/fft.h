// features/fft.h

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

#ifndef GEM_FEATURES_FFT_H_
#define GEM_FEATURES_FFT_H_

#include <complex>
#include <span>
#include <vector>

namespace gem {

bool IsPowerOfTwo(size_t n);

/// In-place iterative radix-2 decimation-in-time FFT, forward direction
/// (X_k = sum_n x_n exp(-2 pi i k n / N)), no normalisation.  The size must
/// be a power of two; InputError otherwise.
void Fft(std::span<std::complex<double>> data);

/// One-sided power spectrum of a real frame zero-padded to `fft_size`,
/// scaled so that the N/2 + 1 bins sum to the frame's energy:
///   P_0 = |X_0|^2 / N, P_k = 2 |X_k|^2 / N (0 < k < N/2),
///   P_{N/2} = |X_{N/2}|^2 / N.
std::vector<double> PowerSpectrum(std::span<const double> frame,
                                  size_t fft_size);

}  // namespace gem

#endif  // GEM_FEATURES_FFT_H_
