// auscult/trainer/adam.cpp
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

#include "auscult/trainer/adam.hpp"

#include <cmath>
#include <string>

#include "auscult/error.hpp"

namespace auscult {

Adam::Adam(const std::vector<Matrix*>& params, AdamConfig cfg) : cfg_(cfg) {
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0) ||
      !(cfg.eps > 0.0)) {
    throw InvalidParameterError("adam betas must lie in [0,1), eps positive");
  }
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const Matrix* p : params) {
    m_.emplace_back(p->rows(), p->cols());
    v_.emplace_back(p->rows(), p->cols());
  }
}

void Adam::step(const std::vector<Matrix*>& params, const std::vector<Matrix*>& grads,
                double lr) {
  if (params.size() != m_.size() || grads.size() != m_.size()) {
    throw InvalidParameterError("adam step got " + std::to_string(params.size()) +
                                " params / " + std::to_string(grads.size()) +
                                " grads, expected " + std::to_string(m_.size()));
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Matrix& p = *params[i];
    const Matrix& g = *grads[i];
    Matrix& m = m_[i];
    Matrix& v = v_[i];
    if (!p.same_shape(m) || !g.same_shape(m)) {
      throw InvalidParameterError("adam tensor " + std::to_string(i) + " changed shape");
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g.at_flat(j);
      m.at_flat(j) = cfg_.beta1 * m.at_flat(j) + (1.0 - cfg_.beta1) * gj;
      v.at_flat(j) = cfg_.beta2 * v.at_flat(j) + (1.0 - cfg_.beta2) * gj * gj;
      const double m_hat = m.at_flat(j) / bc1;
      const double v_hat = v.at_flat(j) / bc2;
      p.at_flat(j) -= lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

}  // namespace auscult
