// auscult/frontend/mel.cpp
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

#include "auscult/frontend/mel.hpp"

#include <cmath>
#include <numbers>

#include "auscult/error.hpp"

namespace auscult {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<double>& re, std::vector<double>& im) {
  const std::size_t n = re.size();
  if (n == 0 || (n & (n - 1)) != 0 || im.size() != n) {
    throw InvalidParameterError("fft_inplace: size must be a power of two");
  }
  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const double wr = std::cos(ang), wi = std::sin(ang);
    for (std::size_t i = 0; i < n; i += len) {
      double cur_r = 1.0, cur_i = 0.0;
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::size_t a = i + k, b = i + k + len / 2;
        const double tr = re[b] * cur_r - im[b] * cur_i;
        const double ti = re[b] * cur_i + im[b] * cur_r;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        const double nr = cur_r * wr - cur_i * wi;
        cur_i = cur_r * wi + cur_i * wr;
        cur_r = nr;
      }
    }
  }
}

MelBank make_mel_bank(int n_mels, int sample_rate, int fft_size) {
  if (n_mels < 1) throw InvalidParameterError("make_mel_bank: n_mels must be >= 1");
  if (sample_rate < 1 || fft_size < 2) {
    throw InvalidParameterError("make_mel_bank: bad sample_rate or fft_size");
  }
  MelBank bank;
  bank.sample_rate = sample_rate;
  bank.fft_size = fft_size;
  const int n_bins = fft_size / 2 + 1;
  const double mel_max = hz_to_mel(sample_rate / 2.0);

  // n_mels + 2 equally spaced mel points from 0 to Nyquist; band b spans
  // [m_b, m_{b+2}] and peaks at m_{b+1}.
  std::vector<double> mel_pts(n_mels + 2);
  for (int i = 0; i < n_mels + 2; ++i) {
    mel_pts[i] = mel_max * static_cast<double>(i) / (n_mels + 1);
  }
  bank.center_hz.resize(n_mels);
  bank.weights.assign(n_mels, std::vector<double>(n_bins, 0.0));
  const double bin_hz = static_cast<double>(sample_rate) / fft_size;
  for (int b = 0; b < n_mels; ++b) {
    const double lo = mel_pts[b], mid = mel_pts[b + 1], hi = mel_pts[b + 2];
    bank.center_hz[b] = mel_to_hz(mid);
    for (int k = 0; k < n_bins; ++k) {
      const double mel_k = hz_to_mel(k * bin_hz);
      double w = 0.0;
      if (mel_k > lo && mel_k < hi) {
        w = mel_k <= mid ? (mel_k - lo) / (mid - lo) : (hi - mel_k) / (hi - mid);
      }
      bank.weights[b][k] = w;
    }
  }
  return bank;
}

TimeFreqRepr mel_frontend(const Waveform& w, int n_mels, int frame_len, int hop) {
  const Matrix frames = frame_signal(w, frame_len, hop);
  const int t_count = frames.cols();
  const int fft_size = next_pow2(frame_len);
  const MelBank bank = make_mel_bank(n_mels, w.sample_rate, fft_size);
  const int n_bins = fft_size / 2 + 1;

  // Symmetric Hann window.
  std::vector<double> window(frame_len);
  for (int s = 0; s < frame_len; ++s) {
    window[s] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * s /
                                     static_cast<double>(frame_len - 1));
  }

  TimeFreqRepr out;
  out.source = FeatureSource::mel;
  out.data = Matrix(n_mels, t_count);

#pragma omp parallel for schedule(static)
  for (int t = 0; t < t_count; ++t) {
    std::vector<double> re(fft_size, 0.0), im(fft_size, 0.0);
    for (int s = 0; s < frame_len; ++s) re[s] = frames(s, t) * window[s];
    fft_inplace(re, im);
    for (int b = 0; b < n_mels; ++b) {
      double e = 0.0;
      for (int k = 0; k < n_bins; ++k) {
        const double p = re[k] * re[k] + im[k] * im[k];
        e += bank.weights[b][k] * p;
      }
      out.data(b, t) = std::log(e + kLogFloor);
    }
  }
  return out;
}

}  // namespace auscult
