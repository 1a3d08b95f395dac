// auscult/frontend/cosgauss.hpp
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

#include <filesystem>
#include <utility>
#include <vector>

#include "auscult/numerics/matrix.hpp"

namespace auscult {

// Hard box for learned center frequencies, applied by clamping after every
// optimizer step.
inline constexpr double kMuMin = 0.001;
inline constexpr double kMuMax = 0.499;

// Bank of cosine-modulated Gaussian kernels.  mu is the only learnable
// parameter per kernel: center frequency in cycles/sample, which also sets
// the bandwidth.
struct GaussKernelBank {
  std::vector<double> mu;
  int kernel_len = 353;  // odd tap count; paper-parity is 8 ms at 44.1 kHz

  int size() const { return static_cast<int>(mu.size()); }
};

// g(l) = cos(2 pi mu l) * exp(-l^2 mu^2 / 2), l = -(k-1)/2 .. (k-1)/2.
// kernel_len must be odd.
std::vector<double> gauss_kernel(double mu, int kernel_len);

// dg/dmu per tap.
std::vector<double> gauss_kernel_mu_grad(double mu, int kernel_len);

// Mel-spaced initial centers: interior points of an (F+1)-way equal split of
// the mel axis up to Nyquist, converted to cycles/sample and clamped to
// [kMuMin, kMuMax] (ties from clamping are nudged to stay increasing).
std::vector<double> init_centers_mel(int num_filters, int sample_rate);

// (original kernel index, center in Hz), sorted ascending by Hz.
std::vector<std::pair<int, double>> dump_centers(const GaussKernelBank& bank,
                                                 int sample_rate);

// CSV with header "index,hz".
void write_centers_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<int, double>>& centers);

// Forward state kept for the backward pass.
struct FilterbankActs {
  Matrix output;             // F x T: ln(pooled + kLogFloor)
  Matrix pooled;             // F x T: mean over valid positions of conv^2
  std::vector<double> conv;  // F x T x V raw convolution outputs
  int valid_len = 0;         // V = S - k + 1
};

// Valid 1-D convolution of every kernel with every frame column, squared,
// average-pooled over the frame, log-compressed.
FilterbankActs filterbank_forward(const Matrix& frames, const GaussKernelBank& bank);

struct FilterbankGrads {
  std::vector<double> mu;  // dL/dmu per kernel
  Matrix frames;           // dL/dframes, same shape as the input
};

FilterbankGrads filterbank_backward(const Matrix& upstream, const Matrix& frames,
                                    const GaussKernelBank& bank,
                                    const FilterbankActs& acts);

}  // namespace auscult
