// auscult/models/blstm.hpp
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

#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

// One LSTM direction.  Gate rows are stacked i, f, g, o (input, forget,
// cell candidate, output); recurrence starts from h = c = 0:
//   a   = w x_t + u h_{t-1} + b
//   i   = sigmoid(a[0:H])      f = sigmoid(a[H:2H])
//   g   = tanh(a[2H:3H])       o = sigmoid(a[3H:4H])
//   c_t = f . c_{t-1} + i . g
//   h_t = o . tanh(c_t)
struct LstmDirection {
  Matrix w;  // 4H x F
  Matrix u;  // 4H x H
  Matrix b;  // 4H x 1
};

// Bidirectional LSTM over the T columns of an F x T representation.
// Forward and backward hidden states are concatenated per step, averaged
// over time, passed through a tanh FC layer, then projected to 2 logits.
struct BlstmClassifier {
  int input_dim = 0;
  int hidden = 64;     // per direction
  int fc_hidden = 64;
  LstmDirection fwd, bwd;
  Matrix fc_w;   // fc_hidden x 2H
  Matrix fc_b;   // fc_hidden x 1
  Matrix out_w;  // 2 x fc_hidden
  Matrix out_b;  // 2 x 1

  static BlstmClassifier init(int input_dim, int hidden, int fc_hidden, Rng& rng);
};

struct LstmDirCache {
  Matrix gates;      // 4H x T, post-activation, indexed by original time
  Matrix cell;       // H x T
  Matrix cell_tanh;  // H x T
  Matrix hidden;     // H x T
};

struct BlstmCache {
  LstmDirCache f, b;
  std::vector<double> mean;    // 2H temporal mean of concatenated states
  std::vector<double> fc_act;  // post-tanh FC activations
  int t_count = 0;
};

std::array<double, 2> blstm_forward(const Matrix& x, const BlstmClassifier& m,
                                    BlstmCache& cache);

struct BlstmGrads {
  LstmDirection fwd, bwd;  // same shapes as the weights
  Matrix fc_w, fc_b, out_w, out_b;
};

BlstmGrads make_blstm_grads(const BlstmClassifier& m);

// Full BPTT.  Parameter gradients are accumulated (+=) into `grads`; the
// input gradient is accumulated into *dx when dx is non-null.
void blstm_backward(const std::array<double, 2>& dlogits, const Matrix& x,
                    const BlstmClassifier& m, const BlstmCache& cache,
                    BlstmGrads& grads, Matrix* dx);

}  // namespace auscult
