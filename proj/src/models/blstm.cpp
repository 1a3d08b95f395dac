// auscult/models/blstm.cpp
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

#include "auscult/models/blstm.hpp"

#include <cmath>

#include "auscult/error.hpp"
#include "auscult/numerics/activations.hpp"

namespace auscult {

namespace {

void xavier_fill(Matrix& m, int fan_in, int fan_out, Rng& rng) {
  const double a = std::sqrt(6.0 / (fan_in + fan_out));
  for (std::size_t i = 0; i < m.size(); ++i) m.at_flat(i) = rng.uniform(-a, a);
}

void validate_model(const BlstmClassifier& m) {
  const int h = m.hidden, f = m.input_dim;
  if (h < 1 || f < 1 || m.fc_hidden < 1) {
    throw InvalidParameterError("blstm: non-positive dimensions");
  }
  auto check_dir = [&](const LstmDirection& d) {
    return d.w.rows() == 4 * h && d.w.cols() == f && d.u.rows() == 4 * h &&
           d.u.cols() == h && d.b.rows() == 4 * h && d.b.cols() == 1;
  };
  if (!check_dir(m.fwd) || !check_dir(m.bwd) || m.fc_w.rows() != m.fc_hidden ||
      m.fc_w.cols() != 2 * h || m.fc_b.rows() != m.fc_hidden ||
      m.out_w.rows() != 2 || m.out_w.cols() != m.fc_hidden || m.out_b.rows() != 2) {
    throw InvalidParameterError("blstm: inconsistent weight shapes");
  }
}

// Runs one direction over the sequence; `order[s]` maps processing step s to
// the original column index.
void run_direction(const Matrix& x, const LstmDirection& d, int hidden,
                   const std::vector<int>& order, LstmDirCache& cache) {
  const int f_count = x.rows();
  const int t_count = x.cols();
  const int h4 = 4 * hidden;
  cache.gates = Matrix(h4, t_count);
  cache.cell = Matrix(hidden, t_count);
  cache.cell_tanh = Matrix(hidden, t_count);
  cache.hidden = Matrix(hidden, t_count);

  std::vector<double> h_prev(hidden, 0.0), c_prev(hidden, 0.0), a(h4);
  for (int s = 0; s < t_count; ++s) {
    const int t = order[s];
    for (int r = 0; r < h4; ++r) {
      double acc = d.b(r, 0);
      for (int q = 0; q < f_count; ++q) acc += d.w(r, q) * x(q, t);
      for (int q = 0; q < hidden; ++q) acc += d.u(r, q) * h_prev[q];
      a[r] = acc;
    }
    for (int q = 0; q < hidden; ++q) {
      const double gi = sigmoid(a[q]);
      const double gf = sigmoid(a[hidden + q]);
      const double gg = std::tanh(a[2 * hidden + q]);
      const double go = sigmoid(a[3 * hidden + q]);
      const double c = gf * c_prev[q] + gi * gg;
      const double ct = std::tanh(c);
      const double h = go * ct;
      cache.gates(q, t) = gi;
      cache.gates(hidden + q, t) = gf;
      cache.gates(2 * hidden + q, t) = gg;
      cache.gates(3 * hidden + q, t) = go;
      cache.cell(q, t) = c;
      cache.cell_tanh(q, t) = ct;
      cache.hidden(q, t) = h;
      c_prev[q] = c;
      h_prev[q] = h;
    }
  }
}

// BPTT over one direction; dh_extra(q, t) is the gradient arriving at h_t
// from outside the recurrence.
void backprop_direction(const Matrix& x, const LstmDirection& d, int hidden,
                        const std::vector<int>& order, const LstmDirCache& cache,
                        const Matrix& dh_extra, LstmDirection& grads, Matrix* dx) {
  const int f_count = x.rows();
  const int t_count = x.cols();
  const int h4 = 4 * hidden;
  std::vector<double> dh_carry(hidden, 0.0), dc_carry(hidden, 0.0), da(h4);

  for (int s = t_count - 1; s >= 0; --s) {
    const int t = order[s];
    const int t_prev = s > 0 ? order[s - 1] : -1;
    for (int q = 0; q < hidden; ++q) {
      const double gi = cache.gates(q, t);
      const double gf = cache.gates(hidden + q, t);
      const double gg = cache.gates(2 * hidden + q, t);
      const double go = cache.gates(3 * hidden + q, t);
      const double ct = cache.cell_tanh(q, t);
      const double c_prev = t_prev >= 0 ? cache.cell(q, t_prev) : 0.0;

      const double dh = dh_extra(q, t) + dh_carry[q];
      const double do_ = dh * ct;
      double dc = dc_carry[q] + dh * go * (1.0 - ct * ct);
      const double di = dc * gg;
      const double df = dc * c_prev;
      const double dg = dc * gi;

      da[q] = di * gi * (1.0 - gi);
      da[hidden + q] = df * gf * (1.0 - gf);
      da[2 * hidden + q] = dg * (1.0 - gg * gg);
      da[3 * hidden + q] = do_ * go * (1.0 - go);
      dc_carry[q] = dc * gf;
    }
    for (int r = 0; r < h4; ++r) {
      const double dar = da[r];
      for (int q = 0; q < f_count; ++q) grads.w(r, q) += dar * x(q, t);
      if (t_prev >= 0) {
        for (int q = 0; q < hidden; ++q) grads.u(r, q) += dar * cache.hidden(q, t_prev);
      }
      grads.b(r, 0) += dar;
    }
    for (int q = 0; q < hidden; ++q) {
      double acc = 0.0;
      for (int r = 0; r < h4; ++r) acc += d.u(r, q) * da[r];
      dh_carry[q] = acc;
    }
    if (dx != nullptr) {
      for (int q = 0; q < f_count; ++q) {
        double acc = 0.0;
        for (int r = 0; r < h4; ++r) acc += d.w(r, q) * da[r];
        (*dx)(q, t) += acc;
      }
    }
  }
}

}  // namespace

BlstmClassifier BlstmClassifier::init(int input_dim, int hidden, int fc_hidden,
                                      Rng& rng) {
  if (input_dim < 1 || hidden < 1 || fc_hidden < 1) {
    throw InvalidParameterError("BlstmClassifier::init: non-positive dimensions");
  }
  BlstmClassifier m;
  m.input_dim = input_dim;
  m.hidden = hidden;
  m.fc_hidden = fc_hidden;
  for (LstmDirection* d : {&m.fwd, &m.bwd}) {
    d->w = Matrix(4 * hidden, input_dim);
    d->u = Matrix(4 * hidden, hidden);
    d->b = Matrix(4 * hidden, 1);
    xavier_fill(d->w, input_dim, hidden, rng);
    xavier_fill(d->u, hidden, hidden, rng);
  }
  m.fc_w = Matrix(fc_hidden, 2 * hidden);
  m.fc_b = Matrix(fc_hidden, 1);
  m.out_w = Matrix(2, fc_hidden);
  m.out_b = Matrix(2, 1);
  xavier_fill(m.fc_w, 2 * hidden, fc_hidden, rng);
  xavier_fill(m.out_w, fc_hidden, 2, rng);
  return m;
}

std::array<double, 2> blstm_forward(const Matrix& x, const BlstmClassifier& m,
                                    BlstmCache& cache) {
  validate_model(m);
  if (x.rows() != m.input_dim) {
    throw InvalidParameterError("blstm_forward: input feature dim mismatch");
  }
  if (x.cols() < 1) throw InputTooShortError("blstm_forward: empty sequence");
  const int t_count = x.cols();
  const int hidden = m.hidden;

  std::vector<int> fwd_order(t_count), bwd_order(t_count);
  for (int t = 0; t < t_count; ++t) {
    fwd_order[t] = t;
    bwd_order[t] = t_count - 1 - t;
  }
  run_direction(x, m.fwd, hidden, fwd_order, cache.f);
  run_direction(x, m.bwd, hidden, bwd_order, cache.b);
  cache.t_count = t_count;

  cache.mean.assign(2 * hidden, 0.0);
  for (int t = 0; t < t_count; ++t) {
    for (int q = 0; q < hidden; ++q) {
      cache.mean[q] += cache.f.hidden(q, t);
      cache.mean[hidden + q] += cache.b.hidden(q, t);
    }
  }
  for (double& v : cache.mean) v /= t_count;

  cache.fc_act.assign(m.fc_hidden, 0.0);
  for (int r = 0; r < m.fc_hidden; ++r) {
    double acc = m.fc_b(r, 0);
    for (int q = 0; q < 2 * hidden; ++q) acc += m.fc_w(r, q) * cache.mean[q];
    cache.fc_act[r] = std::tanh(acc);
  }
  std::array<double, 2> logits{};
  for (int r = 0; r < 2; ++r) {
    double acc = m.out_b(r, 0);
    for (int q = 0; q < m.fc_hidden; ++q) acc += m.out_w(r, q) * cache.fc_act[q];
    logits[r] = acc;
  }
  return logits;
}

BlstmGrads make_blstm_grads(const BlstmClassifier& m) {
  BlstmGrads g;
  for (auto [dst, src] : {std::pair{&g.fwd, &m.fwd}, std::pair{&g.bwd, &m.bwd}}) {
    dst->w = Matrix(src->w.rows(), src->w.cols());
    dst->u = Matrix(src->u.rows(), src->u.cols());
    dst->b = Matrix(src->b.rows(), src->b.cols());
  }
  g.fc_w = Matrix(m.fc_w.rows(), m.fc_w.cols());
  g.fc_b = Matrix(m.fc_b.rows(), m.fc_b.cols());
  g.out_w = Matrix(m.out_w.rows(), m.out_w.cols());
  g.out_b = Matrix(m.out_b.rows(), m.out_b.cols());
  return g;
}

void blstm_backward(const std::array<double, 2>& dlogits, const Matrix& x,
                    const BlstmClassifier& m, const BlstmCache& cache,
                    BlstmGrads& grads, Matrix* dx) {
  validate_model(m);
  const int t_count = cache.t_count;
  const int hidden = m.hidden;
  if (x.cols() != t_count || x.rows() != m.input_dim) {
    throw InvalidParameterError("blstm_backward: input/cache mismatch");
  }

  std::vector<double> dfc_act(m.fc_hidden, 0.0);
  for (int r = 0; r < 2; ++r) {
    for (int q = 0; q < m.fc_hidden; ++q) {
      grads.out_w(r, q) += dlogits[r] * cache.fc_act[q];
      dfc_act[q] += m.out_w(r, q) * dlogits[r];
    }
    grads.out_b(r, 0) += dlogits[r];
  }
  std::vector<double> dmean(2 * hidden, 0.0);
  for (int r = 0; r < m.fc_hidden; ++r) {
    const double dpre = dfc_act[r] * (1.0 - cache.fc_act[r] * cache.fc_act[r]);
    for (int q = 0; q < 2 * hidden; ++q) {
      grads.fc_w(r, q) += dpre * cache.mean[q];
      dmean[q] += m.fc_w(r, q) * dpre;
    }
    grads.fc_b(r, 0) += dpre;
  }

  Matrix dh_f(hidden, t_count), dh_b(hidden, t_count);
  for (int t = 0; t < t_count; ++t) {
    for (int q = 0; q < hidden; ++q) {
      dh_f(q, t) = dmean[q] / t_count;
      dh_b(q, t) = dmean[hidden + q] / t_count;
    }
  }

  std::vector<int> fwd_order(t_count), bwd_order(t_count);
  for (int t = 0; t < t_count; ++t) {
    fwd_order[t] = t;
    bwd_order[t] = t_count - 1 - t;
  }
  backprop_direction(x, m.fwd, hidden, fwd_order, cache.f, dh_f, grads.fwd, dx);
  backprop_direction(x, m.bwd, hidden, bwd_order, cache.b, dh_b, grads.bwd, dx);
}

}  // namespace auscult
