// auscult/frontend/relevance.hpp
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

#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

// Per-bin soft gate over a time-frequency representation.  Every bin (k, j)
// feeds the temporal context x[k, j-c .. j+c] of its own sub-band (edges
// replicated) through a shared 2-layer sigmoid net:
//   mask = sigmoid(w2 * sigmoid(w1 * y + b1) + b2)
// and the output is mask .* x.
struct RelevanceNet {
  int context = 51;  // c; the window is 2c+1 wide
  Matrix w1;         // hidden x (2c+1)
  Matrix b1;         // hidden x 1
  Matrix w2;         // 1 x hidden
  Matrix b2;         // 1 x 1

  int hidden() const { return w1.rows(); }
  int window() const { return 2 * context + 1; }

  // Uniform(-a, a) with a = sqrt(6 / (fan_in + fan_out)); zero biases.
  static RelevanceNet init(int hidden, int context, Rng& rng);
};

struct RelevanceActs {
  Matrix mask;        // F x T, entries in (0, 1)
  Matrix weighted;    // mask .* x
  Matrix hidden_act;  // hidden x (F*T), first-layer sigmoids per bin
};

RelevanceActs relevance_forward(const Matrix& x, const RelevanceNet& net);

struct RelevanceGrads {
  Matrix w1, b1, w2, b2;
  Matrix x;  // includes both the gate path and the direct mask .* upstream term
};

RelevanceGrads relevance_backward(const Matrix& upstream, const Matrix& x,
                                  const RelevanceNet& net, const RelevanceActs& acts);

}  // namespace auscult
