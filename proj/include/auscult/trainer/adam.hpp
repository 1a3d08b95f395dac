// auscult/trainer/adam.hpp
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

#include <vector>

#include "auscult/numerics/matrix.hpp"

namespace auscult {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias correction.  Moment buffers are keyed by tensor index, so
// the same parameter list (same order, same shapes) must be passed to every
// step() call.
class Adam {
 public:
  explicit Adam(const std::vector<Matrix*>& params, AdamConfig cfg = {});

  void step(const std::vector<Matrix*>& params, const std::vector<Matrix*>& grads,
            double lr);

  long long t() const { return t_; }

 private:
  AdamConfig cfg_;
  std::vector<Matrix> m_, v_;
  long long t_ = 0;
};

}  // namespace auscult
