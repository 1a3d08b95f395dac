// auscult/models/tdnn.hpp
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

#include <array>
#include <vector>

#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

// Per-channel temporal mean followed by population standard deviation
// (epsilon inside the sqrt), concatenated: C x T -> 2C.
std::vector<double> stats_pool(const Matrix& h);
inline constexpr double kStatsPoolEps = 1e-8;

// One dilated 1-D convolution over time (valid, ReLU):
//   y[o, t] = relu(b[o] + sum_{ci, q} w[o, ci*context + q] * x[ci, t + q*dilation])
struct TdnnLayer {
  int context = 1;
  int dilation = 1;
  Matrix w;  // out x (in * context)
  Matrix b;  // out x 1
};

// x-vector style classifier: 5 frame-level dilated conv layers with contexts
// {5,3,3,1,1} and dilations {1,2,3,1,1}, stats pooling, two 128-wide ReLU
// segment layers, 2 logits.  Channel widths {512,512,512,512,1500} are scaled
// by width_factor.
struct TdnnClassifier {
  int input_dim = 0;
  std::vector<TdnnLayer> layers;
  Matrix seg1_w, seg1_b;  // 128 x 2C, 128 x 1
  Matrix seg2_w, seg2_b;  // 128 x 128
  Matrix out_w, out_b;    // 2 x 128, 2 x 1

  static TdnnClassifier init(int input_dim, double width_factor, Rng& rng);
  // Arbitrary stack for small exact tests.
  static TdnnClassifier init_custom(int input_dim, const std::vector<int>& channels,
                                    const std::vector<int>& contexts,
                                    const std::vector<int>& dilations, int seg_dim,
                                    Rng& rng);

  // 1 + sum (context - 1) * dilation over the frame-level stack.
  int receptive_field() const;
};

struct TdnnCache {
  std::vector<Matrix> layer_out;  // post-ReLU per layer
  std::vector<double> pooled;     // 2C
  std::vector<double> seg1_act, seg2_act;
  int t_count = 0;
};

// Throws InputTooShortError when T < receptive_field().
std::array<double, 2> tdnn_forward(const Matrix& x, const TdnnClassifier& m,
                                   TdnnCache& cache);

struct TdnnGrads {
  std::vector<TdnnLayer> layers;  // same shapes, gradients in w/b
  Matrix seg1_w, seg1_b, seg2_w, seg2_b, out_w, out_b;
};

TdnnGrads make_tdnn_grads(const TdnnClassifier& m);

void tdnn_backward(const std::array<double, 2>& dlogits, const Matrix& x,
                   const TdnnClassifier& m, const TdnnCache& cache, TdnnGrads& grads,
                   Matrix* dx);

}  // namespace auscult
