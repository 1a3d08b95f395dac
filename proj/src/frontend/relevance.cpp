// auscult/frontend/relevance.cpp
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

#include "auscult/frontend/relevance.hpp"

#include <algorithm>
#include <cmath>

#include "auscult/error.hpp"
#include "auscult/numerics/activations.hpp"

namespace auscult {

namespace {

void validate_net(const RelevanceNet& net) {
  if (net.context < 0) throw InvalidParameterError("relevance: negative context");
  const int hidden = net.w1.rows();
  if (hidden < 1 || net.w1.cols() != net.window()) {
    throw InvalidParameterError("relevance: w1 must be hidden x (2c+1)");
  }
  if (net.b1.rows() != hidden || net.b1.cols() != 1 || net.w2.rows() != 1 ||
      net.w2.cols() != hidden || net.b2.rows() != 1 || net.b2.cols() != 1) {
    throw InvalidParameterError("relevance: inconsistent net shapes");
  }
}

inline int clamp_col(int j, int t_count) {
  return std::clamp(j, 0, t_count - 1);
}

}  // namespace

RelevanceNet RelevanceNet::init(int hidden, int context, Rng& rng) {
  if (hidden < 1) throw InvalidParameterError("RelevanceNet::init: hidden must be >= 1");
  if (context < 0) throw InvalidParameterError("RelevanceNet::init: negative context");
  RelevanceNet net;
  net.context = context;
  const int window = 2 * context + 1;
  net.w1 = Matrix(hidden, window);
  net.b1 = Matrix(hidden, 1);
  net.w2 = Matrix(1, hidden);
  net.b2 = Matrix(1, 1);
  const double a1 = std::sqrt(6.0 / (window + hidden));
  for (std::size_t i = 0; i < net.w1.size(); ++i) {
    net.w1.at_flat(i) = rng.uniform(-a1, a1);
  }
  const double a2 = std::sqrt(6.0 / (hidden + 1));
  for (std::size_t i = 0; i < net.w2.size(); ++i) {
    net.w2.at_flat(i) = rng.uniform(-a2, a2);
  }
  return net;
}

RelevanceActs relevance_forward(const Matrix& x, const RelevanceNet& net) {
  validate_net(net);
  const int f_count = x.rows(), t_count = x.cols();
  if (f_count < 1 || t_count < 1) {
    throw InvalidParameterError("relevance_forward: empty input");
  }
  const int hidden = net.hidden();
  const int window = net.window();
  const int c = net.context;

  RelevanceActs acts;
  acts.mask = Matrix(f_count, t_count);
  acts.weighted = Matrix(f_count, t_count);
  acts.hidden_act = Matrix(hidden, f_count * t_count);

#pragma omp parallel for collapse(2) schedule(static)
  for (int kk = 0; kk < f_count; ++kk) {
    for (int j = 0; j < t_count; ++j) {
      const int bin = kk * t_count + j;
      double a2 = net.b2(0, 0);
      for (int r = 0; r < hidden; ++r) {
        double a1 = net.b1(r, 0);
        for (int q = 0; q < window; ++q) {
          a1 += net.w1(r, q) * x(kk, clamp_col(j - c + q, t_count));
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
  validate_net(net);
  const int f_count = x.rows(), t_count = x.cols();
  if (!upstream.same_shape(x) || !acts.mask.same_shape(x)) {
    throw InvalidParameterError("relevance_backward: shape mismatch");
  }
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

  // Pass 1: per-bin local deltas.
  Matrix da2(1, n_bins);
  Matrix da1(hidden, n_bins);
#pragma omp parallel for collapse(2) schedule(static)
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

  // Pass 2: parameter gradients; each thread owns full rows, bins are
  // accumulated in ascending order so the sums match the serial reference.
#pragma omp parallel for schedule(static)
  for (int r = 0; r < hidden; ++r) {
    for (int q = 0; q < window; ++q) {
      double acc = 0.0;
      for (int kk = 0; kk < f_count; ++kk) {
        for (int j = 0; j < t_count; ++j) {
          acc += da1(r, kk * t_count + j) * x(kk, clamp_col(j - c + q, t_count));
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

  // Pass 3: input gradient.  The context window stays inside one sub-band,
  // so rows are independent.
#pragma omp parallel for schedule(static)
  for (int kk = 0; kk < f_count; ++kk) {
    for (int j = 0; j < t_count; ++j) {
      grads.x(kk, j) = upstream(kk, j) * acts.mask(kk, j);
    }
    for (int j = 0; j < t_count; ++j) {
      const int bin = kk * t_count + j;
      for (int q = 0; q < window; ++q) {
        double dy = 0.0;
        for (int r = 0; r < hidden; ++r) dy += net.w1(r, q) * da1(r, bin);
        grads.x(kk, clamp_col(j - c + q, t_count)) += dy;
      }
    }
  }
  return grads;
}

}  // namespace auscult
