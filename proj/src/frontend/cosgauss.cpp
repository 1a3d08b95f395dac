// auscult/frontend/cosgauss.cpp
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

#include "auscult/frontend/cosgauss.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "auscult/error.hpp"
#include "auscult/frontend/mel.hpp"

namespace auscult {

namespace {

void validate_bank(const GaussKernelBank& bank) {
  if (bank.size() < 1) throw InvalidParameterError("filterbank: empty bank");
  if (bank.kernel_len < 1 || bank.kernel_len % 2 == 0) {
    throw InvalidParameterError("filterbank: kernel_len must be odd and >= 1");
  }
  for (double m : bank.mu) {
    if (!std::isfinite(m) || m <= 0.0 || m >= 0.5) {
      throw InvalidParameterError("filterbank: mu outside (0, 0.5)");
    }
  }
}

}  // namespace

std::vector<double> gauss_kernel(double mu, int kernel_len) {
  if (kernel_len < 1 || kernel_len % 2 == 0) {
    throw InvalidParameterError("gauss_kernel: kernel_len must be odd and >= 1");
  }
  if (!std::isfinite(mu)) throw InvalidParameterError("gauss_kernel: non-finite mu");
  const int half = (kernel_len - 1) / 2;
  std::vector<double> g(kernel_len);
  for (int i = 0; i < kernel_len; ++i) {
    const double l = static_cast<double>(i - half);
    g[i] = std::cos(2.0 * std::numbers::pi * mu * l) *
           std::exp(-l * l * mu * mu / 2.0);
  }
  return g;
}

std::vector<double> gauss_kernel_mu_grad(double mu, int kernel_len) {
  if (kernel_len < 1 || kernel_len % 2 == 0) {
    throw InvalidParameterError("gauss_kernel_mu_grad: kernel_len must be odd and >= 1");
  }
  const int half = (kernel_len - 1) / 2;
  std::vector<double> d(kernel_len);
  for (int i = 0; i < kernel_len; ++i) {
    const double l = static_cast<double>(i - half);
    const double env = std::exp(-l * l * mu * mu / 2.0);
    const double phase = 2.0 * std::numbers::pi * mu * l;
    d[i] = env * (-2.0 * std::numbers::pi * l * std::sin(phase) -
                  l * l * mu * std::cos(phase));
  }
  return d;
}

std::vector<double> init_centers_mel(int num_filters, int sample_rate) {
  if (num_filters < 1) {
    throw InvalidParameterError("init_centers_mel: num_filters must be >= 1");
  }
  if (sample_rate < 2) {
    throw InvalidParameterError("init_centers_mel: bad sample_rate");
  }
  const double mel_max = hz_to_mel(sample_rate / 2.0);
  std::vector<double> mu(num_filters);
  for (int i = 0; i < num_filters; ++i) {
    const double mel = mel_max * static_cast<double>(i + 1) / (num_filters + 1);
    const double hz = mel_to_hz(mel);
    mu[i] = std::clamp(hz / sample_rate, kMuMin, kMuMax);
  }
  // Clamping can flatten the lowest centers onto kMuMin; keep the bank
  // strictly increasing.
  for (int i = 1; i < num_filters; ++i) {
    if (mu[i] <= mu[i - 1]) mu[i] = mu[i - 1] + 1e-7;
  }
  return mu;
}

std::vector<std::pair<int, double>> dump_centers(const GaussKernelBank& bank,
                                                 int sample_rate) {
  validate_bank(bank);
  std::vector<std::pair<int, double>> centers(bank.size());
  for (int i = 0; i < bank.size(); ++i) {
    centers[i] = {i, bank.mu[i] * sample_rate};
  }
  std::stable_sort(centers.begin(), centers.end(),
                   [](const auto& a, const auto& b) { return a.second < b.second; });
  return centers;
}

void write_centers_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<int, double>>& centers) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_centers_csv: cannot open " + path.string());
  out << "index,hz\n";
  char buf[64];
  for (const auto& [idx, hz] : centers) {
    std::snprintf(buf, sizeof(buf), "%.17g", hz);
    out << idx << "," << buf << "\n";
  }
  if (!out) throw IoError("write_centers_csv: write failed for " + path.string());
}

FilterbankActs filterbank_forward(const Matrix& frames, const GaussKernelBank& bank) {
  validate_bank(bank);
  const int frame_len = frames.rows();
  const int t_count = frames.cols();
  const int f_count = bank.size();
  const int k = bank.kernel_len;
  if (frame_len < k) {
    throw InputTooShortError("filterbank_forward: frame shorter than kernel");
  }
  const int v_count = frame_len - k + 1;

  Matrix kernels(f_count, k);
  for (int i = 0; i < f_count; ++i) {
    const std::vector<double> g = gauss_kernel(bank.mu[i], k);
    for (int l = 0; l < k; ++l) kernels(i, l) = g[l];
  }

  FilterbankActs acts;
  acts.valid_len = v_count;
  acts.output = Matrix(f_count, t_count);
  acts.pooled = Matrix(f_count, t_count);
  acts.conv.assign(static_cast<std::size_t>(f_count) * t_count * v_count, 0.0);

  // Frames are columns of a row-major matrix; each thread copies its frame
  // into a contiguous buffer once and sweeps all kernels over it.
#pragma omp parallel for schedule(static)
  for (int t = 0; t < t_count; ++t) {
    std::vector<double> buf(frame_len);
    for (int s = 0; s < frame_len; ++s) buf[s] = frames(s, t);
    for (int i = 0; i < f_count; ++i) {
      const double* g = &kernels(i, 0);
      double* c = &acts.conv[(static_cast<std::size_t>(i) * t_count + t) * v_count];
      double energy = 0.0;
      for (int v = 0; v < v_count; ++v) {
        double acc = 0.0;
        for (int l = 0; l < k; ++l) acc += g[l] * buf[v + l];
        c[v] = acc;
        energy += acc * acc;
      }
      const double pooled = energy / v_count;
      acts.pooled(i, t) = pooled;
      acts.output(i, t) = std::log(pooled + kLogFloor);
    }
  }
  return acts;
}

FilterbankGrads filterbank_backward(const Matrix& upstream, const Matrix& frames,
                                    const GaussKernelBank& bank,
                                    const FilterbankActs& acts) {
  validate_bank(bank);
  const int frame_len = frames.rows();
  const int t_count = frames.cols();
  const int f_count = bank.size();
  const int k = bank.kernel_len;
  const int v_count = acts.valid_len;
  if (upstream.rows() != f_count || upstream.cols() != t_count) {
    throw InvalidParameterError("filterbank_backward: upstream shape mismatch");
  }
  if (v_count != frame_len - k + 1 ||
      acts.conv.size() != static_cast<std::size_t>(f_count) * t_count * v_count) {
    throw InvalidParameterError("filterbank_backward: stale forward cache");
  }

  FilterbankGrads grads;
  grads.mu.assign(f_count, 0.0);
  grads.frames = Matrix(frame_len, t_count);

  Matrix kernels(f_count, k);
  for (int i = 0; i < f_count; ++i) {
    const std::vector<double> g = gauss_kernel(bank.mu[i], k);
    for (int l = 0; l < k; ++l) kernels(i, l) = g[l];
  }

  // dL/dconv = upstream / (pooled + floor) * 2 conv / V; correlate with the
  // frame to get the per-tap kernel gradient, then project onto dg/dmu.
#pragma omp parallel for schedule(static)
  for (int i = 0; i < f_count; ++i) {
    std::vector<double> dkernel(k, 0.0);
    std::vector<double> buf(frame_len);
    for (int t = 0; t < t_count; ++t) {
      for (int s = 0; s < frame_len; ++s) buf[s] = frames(s, t);
      const double scale =
          upstream(i, t) / (acts.pooled(i, t) + kLogFloor) * 2.0 / v_count;
      const double* c = &acts.conv[(static_cast<std::size_t>(i) * t_count + t) * v_count];
      for (int v = 0; v < v_count; ++v) {
        const double u = scale * c[v];
        for (int l = 0; l < k; ++l) dkernel[l] += u * buf[v + l];
      }
    }
    const std::vector<double> dg = gauss_kernel_mu_grad(bank.mu[i], k);
    double acc = 0.0;
    for (int l = 0; l < k; ++l) acc += dkernel[l] * dg[l];
    grads.mu[i] = acc;
  }

  // Transposed convolution back onto the frame samples; columns are disjoint
  // across threads.
#pragma omp parallel for schedule(static)
  for (int t = 0; t < t_count; ++t) {
    for (int i = 0; i < f_count; ++i) {
      const double scale =
          upstream(i, t) / (acts.pooled(i, t) + kLogFloor) * 2.0 / v_count;
      const double* c = &acts.conv[(static_cast<std::size_t>(i) * t_count + t) * v_count];
      const double* g = &kernels(i, 0);
      for (int v = 0; v < v_count; ++v) {
        const double u = scale * c[v];
        for (int l = 0; l < k; ++l) grads.frames(v + l, t) += u * g[l];
      }
    }
  }
  return grads;
}

}  // namespace auscult
