// auscult/frontend/reference.cpp
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

#include "auscult/frontend/reference.hpp"

#include <algorithm>
#include <cmath>

#include "auscult/error.hpp"
#include "auscult/frontend/mel.hpp"
#include "auscult/numerics/activations.hpp"

namespace auscult::reference {

FilterbankActs filterbank_forward(const Matrix& frames, const GaussKernelBank& bank) {
  const int frame_len = frames.rows();
  const int t_count = frames.cols();
  const int f_count = bank.size();
  const int k = bank.kernel_len;
  if (frame_len < k) {
    throw InputTooShortError("reference::filterbank_forward: frame shorter than kernel");
  }
  const int v_count = frame_len - k + 1;

  FilterbankActs acts;
  acts.valid_len = v_count;
  acts.output = Matrix(f_count, t_count);
  acts.pooled = Matrix(f_count, t_count);
  acts.conv.assign(static_cast<std::size_t>(f_count) * t_count * v_count, 0.0);

  for (int t = 0; t < t_count; ++t) {
    for (int i = 0; i < f_count; ++i) {
      const std::vector<double> g = gauss_kernel(bank.mu[i], k);
      double energy = 0.0;
      for (int v = 0; v < v_count; ++v) {
        double acc = 0.0;
        for (int l = 0; l < k; ++l) acc += g[l] * frames(v + l, t);
        acts.conv[(static_cast<std::size_t>(i) * t_count + t) * v_count + v] = acc;
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
  const int frame_len = frames.rows();
  const int t_count = frames.cols();
  const int f_count = bank.size();
  const int k = bank.kernel_len;
  const int v_count = acts.valid_len;

  FilterbankGrads grads;
  grads.mu.assign(f_count, 0.0);
  grads.frames = Matrix(frame_len, t_count);

  for (int i = 0; i < f_count; ++i) {
    std::vector<double> dkernel(k, 0.0);
    for (int t = 0; t < t_count; ++t) {
      const double scale =
          upstream(i, t) / (acts.pooled(i, t) + kLogFloor) * 2.0 / v_count;
      for (int v = 0; v < v_count; ++v) {
        const double u =
            scale * acts.conv[(static_cast<std::size_t>(i) * t_count + t) * v_count + v];
        for (int l = 0; l < k; ++l) dkernel[l] += u * frames(v + l, t);
      }
    }
    const std::vector<double> dg = gauss_kernel_mu_grad(bank.mu[i], k);
    double acc = 0.0;
    for (int l = 0; l < k; ++l) acc += dkernel[l] * dg[l];
    grads.mu[i] = acc;
  }

  for (int t = 0; t < t_count; ++t) {
    for (int i = 0; i < f_count; ++i) {
      const std::vector<double> g = gauss_kernel(bank.mu[i], k);
      const double scale =
          upstream(i, t) / (acts.pooled(i, t) + kLogFloor) * 2.0 / v_count;
      for (int v = 0; v < v_count; ++v) {
        const double u =
            scale * acts.conv[(static_cast<std::size_t>(i) * t_count + t) * v_count + v];
        for (int l = 0; l < k; ++l) grads.frames(v + l, t) += u * g[l];
      }
    }
  }
  return grads;
}

RelevanceActs relevance_forward(const Matrix& x, const RelevanceNet& net) {
  const int f_count = x.rows(), t_count = x.cols();
  const int hidden = net.hidden();
  const int window = net.window();
  const int c = net.context;

  RelevanceActs acts;
  acts.mask = Matrix(f_count, t_count);
  acts.weighted = Matrix(f_count, t_count);
  acts.hidden_act = Matrix(hidden, f_count * t_count);

  for (int kk = 0; kk < f_count; ++kk) {
    for (int j = 0; j < t_count; ++j) {
      const int bin = kk * t_count + j;
      double a2 = net.b2(0, 0);
      for (int r = 0; r < hidden; ++r) {
        double a1 = net.b1(r, 0);
        for (int q = 0; q < window; ++q) {
          const int src = std::clamp(j - c + q, 0, t_count - 1);
          a1 += net.w1(r, q) * x(kk, src);
        }
        const double h = sigmoid(a1);
        acts.hidden_act(r, bin) = h;
        a2 += net.w2(0, r) * h;
      }
      const double m = sigmoid(a2);
      acts.mask(kk, j) = m;
      acts.weighted(kk, j) = m * x(kk, j);
    }
  }
  return acts;
}

RelevanceGrads relevance_backward(const Matrix& upstream, const Matrix& x,
                                  const RelevanceNet& net, const RelevanceActs& acts) {
  const int f_count = x.rows(), t_count = x.cols();
  const int hidden = net.hidden();
  const int window = net.window();
  const int c = net.context;
  const int n_bins = f_count * t_count;

  RelevanceGrads grads;
  grads.w1 = Matrix(hidden, window);
  grads.b1 = Matrix(hidden, 1);
  grads.w2 = Matrix(1, hidden);
  grads.b2 = Matrix(1, 1);
  grads.x = Matrix(f_count, t_count);

  Matrix da2(1, n_bins);
  Matrix da1(hidden, n_bins);
  for (int kk = 0; kk < f_count; ++kk) {
    for (int j = 0; j < t_count; ++j) {
      const int bin = kk * t_count + j;
      const double m = acts.mask(kk, j);
      const double d2 = upstream(kk, j) * x(kk, j) * m * (1.0 - m);
      da2(0, bin) = d2;
      for (int r = 0; r < hidden; ++r) {
        const double h = acts.hidden_act(r, bin);
        da1(r, bin) = d2 * net.w2(0, r) * h * (1.0 - h);
      }
    }
  }

  for (int r = 0; r < hidden; ++r) {
    for (int q = 0; q < window; ++q) {
      double acc = 0.0;
      for (int kk = 0; kk < f_count; ++kk) {
        for (int j = 0; j < t_count; ++j) {
          const int src = std::clamp(j - c + q, 0, t_count - 1);
          acc += da1(r, kk * t_count + j) * x(kk, src);
        }
      }
      grads.w1(r, q) = acc;
    }
    double acc_b = 0.0, acc_w2 = 0.0;
    for (int bin = 0; bin < n_bins; ++bin) {
      acc_b += da1(r, bin);
      acc_w2 += da2(0, bin) * acts.hidden_act(r, bin);
    }
    grads.b1(r, 0) = acc_b;
    grads.w2(0, r) = acc_w2;
  }
  double acc_b2 = 0.0;
  for (int bin = 0; bin < n_bins; ++bin) acc_b2 += da2(0, bin);
  grads.b2(0, 0) = acc_b2;

  for (int kk = 0; kk < f_count; ++kk) {
    for (int j = 0; j < t_count; ++j) {
      grads.x(kk, j) = upstream(kk, j) * acts.mask(kk, j);
    }
    for (int j = 0; j < t_count; ++j) {
      const int bin = kk * t_count + j;
      for (int q = 0; q < window; ++q) {
        double dy = 0.0;
        for (int r = 0; r < hidden; ++r) dy += net.w1(r, q) * da1(r, bin);
        const int src = std::clamp(j - c + q, 0, t_count - 1);
        grads.x(kk, src) += dy;
      }
    }
  }
  return grads;
}

}  // namespace auscult::reference
