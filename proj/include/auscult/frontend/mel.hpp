// auscult/frontend/mel.hpp
//
// Copyright 2026 the auscult authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "auscult/frontend/framing.hpp"
#include "auscult/numerics/matrix.hpp"

namespace auscult {

// Floor added before the log in both frontends.
inline constexpr double kLogFloor = 1e-10;

// HTK mel scale.
double hz_to_mel(double hz);
double mel_to_hz(double mel);

int next_pow2(int n);

// In-place iterative radix-2 FFT; size must be a power of two.
void fft_inplace(std::vector<double>& re, std::vector<double>& im);

enum class FeatureSource { learned, mel };

struct TimeFreqRepr {
  Matrix data;  // F x T log energies
  FeatureSource source = FeatureSource::mel;
};

// Triangular mel filter bank over power-spectrum bins 0..fft_size/2,
// n_mels bands spread between 0 Hz and Nyquist.
struct MelBank {
  int sample_rate = 0;
  int fft_size = 0;
  std::vector<double> center_hz;             // band peak frequencies
  std::vector<std::vector<double>> weights;  // per band, over all bins
};

MelBank make_mel_bank(int n_mels, int sample_rate, int fft_size);

// Fixed log-mel spectrogram: Hann window per frame, zero-padded FFT
// (size = next power of two >= frame_len), triangular mel energies,
// ln(e + kLogFloor).  Shape-compatible with the learned frontend.
TimeFreqRepr mel_frontend(const Waveform& w, int n_mels, int frame_len, int hop);

}  // namespace auscult
