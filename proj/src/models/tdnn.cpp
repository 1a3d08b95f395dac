// auscult/models/tdnn.cpp
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

#include "auscult/models/tdnn.hpp"

#include <cmath>
#include <string>

#include "auscult/error.hpp"

namespace auscult {

namespace {

Matrix xavier(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  const double a = std::sqrt(6.0 / (rows + cols));
  for (int i = 0; i < rows * cols; ++i) m.at_flat(i) = rng.uniform(-a, a);
  return m;
}

int conv_out_len(int t, int context, int dilation) {
  return t - (context - 1) * dilation;
}

// Valid dilated conv + ReLU.  Parallel over output channels; each thread owns
// whole rows of y, inner sums run serially, so results match the serial
// reference bitwise.
Matrix layer_forward(const Matrix& x, const TdnnLayer& layer) {
  const int in = x.rows();
  const int t_out = conv_out_len(x.cols(), layer.context, layer.dilation);
  const int out = layer.w.rows();
  Matrix y(out, t_out);
#pragma omp parallel for schedule(static)
  for (int o = 0; o < out; ++o) {
    for (int t = 0; t < t_out; ++t) {
      double acc = layer.b(o, 0);
      for (int ci = 0; ci < in; ++ci) {
        for (int q = 0; q < layer.context; ++q) {
          acc += layer.w(o, ci * layer.context + q) * x(ci, t + q * layer.dilation);
        }
      }
      y(o, t) = acc > 0.0 ? acc : 0.0;
    }
  }
  return y;
}

}  // namespace

std::vector<double> stats_pool(const Matrix& h) {
  const int c_count = h.rows();
  const int t = h.cols();
  std::vector<double> pooled(2 * c_count);
  for (int c = 0; c < c_count; ++c) {
    double sum = 0.0;
    for (int i = 0; i < t; ++i) sum += h(c, i);
    const double mean = sum / t;
    double sq = 0.0;
    for (int i = 0; i < t; ++i) {
      const double d = h(c, i) - mean;
      sq += d * d;
    }
    pooled[c] = mean;
    pooled[c_count + c] = std::sqrt(sq / t + kStatsPoolEps);
  }
  return pooled;
}

TdnnClassifier TdnnClassifier::init(int input_dim, double width_factor, Rng& rng) {
  const std::vector<int> base = {512, 512, 512, 512, 1500};
  std::vector<int> channels(base.size());
  for (size_t i = 0; i < base.size(); ++i) {
    channels[i] = std::max(1, static_cast<int>(base[i] * width_factor));
  }
  return init_custom(input_dim, channels, {5, 3, 3, 1, 1}, {1, 2, 3, 1, 1}, 128, rng);
}

TdnnClassifier TdnnClassifier::init_custom(int input_dim, const std::vector<int>& channels,
                                           const std::vector<int>& contexts,
                                           const std::vector<int>& dilations, int seg_dim,
                                           Rng& rng) {
  if (input_dim <= 0) throw InvalidParameterError("tdnn input_dim must be positive");
  if (channels.empty() || channels.size() != contexts.size() ||
      channels.size() != dilations.size()) {
    throw InvalidParameterError("tdnn layer spec lists must be non-empty and equal length");
  }
  TdnnClassifier m;
  m.input_dim = input_dim;
  int in = input_dim;
  for (size_t i = 0; i < channels.size(); ++i) {
    if (channels[i] <= 0 || contexts[i] <= 0 || dilations[i] <= 0) {
      throw InvalidParameterError("tdnn layer sizes must be positive");
    }
    TdnnLayer layer;
    layer.context = contexts[i];
    layer.dilation = dilations[i];
    layer.w = xavier(channels[i], in * contexts[i], rng);
    layer.b = Matrix(channels[i], 1);
    m.layers.push_back(std::move(layer));
    in = channels[i];
  }
  m.seg1_w = xavier(seg_dim, 2 * in, rng);
  m.seg1_b = Matrix(seg_dim, 1);
  m.seg2_w = xavier(seg_dim, seg_dim, rng);
  m.seg2_b = Matrix(seg_dim, 1);
  m.out_w = xavier(2, seg_dim, rng);
  m.out_b = Matrix(2, 1);
  return m;
}

int TdnnClassifier::receptive_field() const {
  int rf = 1;
  for (const TdnnLayer& layer : layers) rf += (layer.context - 1) * layer.dilation;
  return rf;
}

std::array<double, 2> tdnn_forward(const Matrix& x, const TdnnClassifier& m,
                                   TdnnCache& cache) {
  if (x.rows() != m.input_dim) {
    throw InvalidParameterError("tdnn input has " + std::to_string(x.rows()) +
                                " rows, model expects " + std::to_string(m.input_dim));
  }
  const int rf = m.receptive_field();
  if (x.cols() < rf) {
    throw InputTooShortError("tdnn needs at least " + std::to_string(rf) +
                             " frames, got " + std::to_string(x.cols()));
  }
  cache.t_count = x.cols();
  cache.layer_out.clear();
  const Matrix* cur = &x;
  for (const TdnnLayer& layer : m.layers) {
    cache.layer_out.push_back(layer_forward(*cur, layer));
    cur = &cache.layer_out.back();
  }
  cache.pooled = stats_pool(*cur);

  const int seg = m.seg1_w.rows();
  cache.seg1_act.assign(seg, 0.0);
  for (int r = 0; r < seg; ++r) {
    double acc = m.seg1_b(r, 0);
    for (size_t j = 0; j < cache.pooled.size(); ++j) {
      acc += m.seg1_w(r, static_cast<int>(j)) * cache.pooled[j];
    }
    cache.seg1_act[r] = acc > 0.0 ? acc : 0.0;
  }
  cache.seg2_act.assign(seg, 0.0);
  for (int r = 0; r < seg; ++r) {
    double acc = m.seg2_b(r, 0);
    for (int j = 0; j < seg; ++j) acc += m.seg2_w(r, j) * cache.seg1_act[j];
    cache.seg2_act[r] = acc > 0.0 ? acc : 0.0;
  }
  std::array<double, 2> logits{};
  for (int r = 0; r < 2; ++r) {
    double acc = m.out_b(r, 0);
    for (int j = 0; j < seg; ++j) acc += m.out_w(r, j) * cache.seg2_act[j];
    logits[static_cast<size_t>(r)] = acc;
  }
  return logits;
}

TdnnGrads make_tdnn_grads(const TdnnClassifier& m) {
  TdnnGrads g;
  for (const TdnnLayer& layer : m.layers) {
    TdnnLayer zero;
    zero.context = layer.context;
    zero.dilation = layer.dilation;
    zero.w = Matrix(layer.w.rows(), layer.w.cols());
    zero.b = Matrix(layer.b.rows(), 1);
    g.layers.push_back(std::move(zero));
  }
  g.seg1_w = Matrix(m.seg1_w.rows(), m.seg1_w.cols());
  g.seg1_b = Matrix(m.seg1_b.rows(), 1);
  g.seg2_w = Matrix(m.seg2_w.rows(), m.seg2_w.cols());
  g.seg2_b = Matrix(m.seg2_b.rows(), 1);
  g.out_w = Matrix(m.out_w.rows(), m.out_w.cols());
  g.out_b = Matrix(m.out_b.rows(), 1);
  return g;
}

namespace {

// Backward through one conv layer.  dy is the gradient at the post-ReLU
// output; dx_prev receives the gradient at the layer input (accumulated).
// Weight rows and input rows are each owned by a single thread.
void layer_backward(const Matrix& x_in, const Matrix& y_out, const TdnnLayer& layer,
                    const Matrix& dy, TdnnLayer& grads, Matrix& dx_prev) {
  const int out = layer.w.rows();
  const int in = x_in.rows();
  const int t_out = y_out.cols();
  // ReLU subgradient: pass only where the activation is strictly positive.
  Matrix da(out, t_out);
  for (int o = 0; o < out; ++o) {
    for (int t = 0; t < t_out; ++t) {
      da(o, t) = y_out(o, t) > 0.0 ? dy(o, t) : 0.0;
    }
  }
#pragma omp parallel for schedule(static)
  for (int o = 0; o < out; ++o) {
    double db = 0.0;
    for (int t = 0; t < t_out; ++t) db += da(o, t);
    grads.b(o, 0) += db;
    for (int ci = 0; ci < in; ++ci) {
      for (int q = 0; q < layer.context; ++q) {
        double acc = 0.0;
        for (int t = 0; t < t_out; ++t) acc += da(o, t) * x_in(ci, t + q * layer.dilation);
        grads.w(o, ci * layer.context + q) += acc;
      }
    }
  }
#pragma omp parallel for schedule(static)
  for (int ci = 0; ci < in; ++ci) {
    for (int o = 0; o < out; ++o) {
      for (int q = 0; q < layer.context; ++q) {
        const double wv = layer.w(o, ci * layer.context + q);
        for (int t = 0; t < t_out; ++t) {
          dx_prev(ci, t + q * layer.dilation) += wv * da(o, t);
        }
      }
    }
  }
}

}  // namespace

void tdnn_backward(const std::array<double, 2>& dlogits, const Matrix& x,
                   const TdnnClassifier& m, const TdnnCache& cache, TdnnGrads& grads,
                   Matrix* dx) {
  const int seg = m.seg1_w.rows();
  // Output layer.
  std::vector<double> da2(seg, 0.0);
  for (int r = 0; r < 2; ++r) {
    grads.out_b(r, 0) += dlogits[static_cast<size_t>(r)];
    for (int j = 0; j < seg; ++j) {
      grads.out_w(r, j) += dlogits[static_cast<size_t>(r)] * cache.seg2_act[j];
      da2[j] += m.out_w(r, j) * dlogits[static_cast<size_t>(r)];
    }
  }
  for (int j = 0; j < seg; ++j) {
    if (!(cache.seg2_act[j] > 0.0)) da2[j] = 0.0;
  }
  // Second segment layer.
  std::vector<double> da1(seg, 0.0);
  for (int r = 0; r < seg; ++r) {
    grads.seg2_b(r, 0) += da2[r];
    for (int j = 0; j < seg; ++j) {
      grads.seg2_w(r, j) += da2[r] * cache.seg1_act[j];
      da1[j] += m.seg2_w(r, j) * da2[r];
    }
  }
  for (int j = 0; j < seg; ++j) {
    if (!(cache.seg1_act[j] > 0.0)) da1[j] = 0.0;
  }
  // First segment layer.
  std::vector<double> dpooled(cache.pooled.size(), 0.0);
  for (int r = 0; r < seg; ++r) {
    grads.seg1_b(r, 0) += da1[r];
    for (size_t j = 0; j < cache.pooled.size(); ++j) {
      grads.seg1_w(r, static_cast<int>(j)) += da1[r] * cache.pooled[j];
      dpooled[j] += m.seg1_w(r, static_cast<int>(j)) * da1[r];
    }
  }
  // Stats pooling: d mean and d std back to the last frame-level layer.
  const Matrix& top = cache.layer_out.back();
  const int c_count = top.rows();
  const int t_top = top.cols();
  Matrix dtop(c_count, t_top);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < c_count; ++c) {
    const double mean = cache.pooled[c];
    const double sd = cache.pooled[c_count + c];
    const double dmean = dpooled[static_cast<size_t>(c)];
    const double dsd = dpooled[static_cast<size_t>(c_count + c)];
    for (int t = 0; t < t_top; ++t) {
      dtop(c, t) = dmean / t_top + dsd * (top(c, t) - mean) / (t_top * sd);
    }
  }
  // Frame-level stack in reverse.
  Matrix dy = std::move(dtop);
  for (int li = static_cast<int>(m.layers.size()) - 1; li >= 0; --li) {
    const Matrix& x_in = li == 0 ? x : cache.layer_out[static_cast<size_t>(li - 1)];
    Matrix dx_prev(x_in.rows(), x_in.cols());
    layer_backward(x_in, cache.layer_out[static_cast<size_t>(li)], m.layers[static_cast<size_t>(li)],
                   dy, grads.layers[static_cast<size_t>(li)], dx_prev);
    dy = std::move(dx_prev);
  }
  if (dx != nullptr) {
    if (dx->rows() != dy.rows() || dx->cols() != dy.cols()) *dx = Matrix(dy.rows(), dy.cols());
    for (int i = 0; i < dy.rows() * dy.cols(); ++i) dx->at_flat(i) += dy.at_flat(i);
  }
}

}  // namespace auscult
