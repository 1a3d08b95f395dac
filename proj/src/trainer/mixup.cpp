// auscult/trainer/mixup.cpp
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

#include "auscult/trainer/mixup.hpp"

#include <string>

#include "auscult/error.hpp"
#include "auscult/numerics/activations.hpp"

namespace auscult {

MiniBatch mixup_batch(const std::vector<Matrix>& x, const std::vector<int>& y,
                      double alpha, Rng& rng, std::optional<double> force_lambda) {
  const int m = static_cast<int>(x.size());
  if (m < 2) {
    throw BatchTooSmallError("mixup needs at least 2 samples, got " + std::to_string(m));
  }
  if (y.size() != x.size()) throw InvalidParameterError("mixup labels/inputs mismatch");
  if (!(alpha > 0.0)) throw InvalidParameterError("mixup alpha must be positive");
  for (int i = 1; i < m; ++i) {
    if (!x[static_cast<size_t>(i)].same_shape(x[0])) {
      throw InvalidParameterError("mixup batch samples must share one shape");
    }
  }
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidParameterError("mixup labels must be 0/1");
  }
  if (force_lambda && !(*force_lambda >= 0.0 && *force_lambda <= 1.0)) {
    throw InvalidParameterError("forced lambda must lie in [0,1]");
  }

  MiniBatch batch;
  batch.y = y;
  batch.lambda.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    batch.lambda[static_cast<size_t>(i)] =
        force_lambda ? *force_lambda : sample_beta(alpha, rng);
  }
  batch.perm = rng.permutation(m);

  batch.x.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double lam = batch.lambda[static_cast<size_t>(i)];
    const Matrix& a = x[static_cast<size_t>(i)];
    const Matrix& b = x[static_cast<size_t>(batch.perm[static_cast<size_t>(i)])];
    Matrix mixed(a.rows(), a.cols());
    for (std::size_t j = 0; j < mixed.size(); ++j) {
      mixed.at_flat(j) = lam * a.at_flat(j) + (1.0 - lam) * b.at_flat(j);
    }
    batch.x.push_back(std::move(mixed));
  }
  return batch;
}

double mixup_loss(const std::vector<double>& y_hat, const std::vector<int>& y_m,
                  const std::vector<int>& y_n, const std::vector<double>& lambda) {
  if (y_hat.empty() || y_hat.size() != y_m.size() || y_hat.size() != y_n.size() ||
      y_hat.size() != lambda.size()) {
    throw InvalidParameterError("mixup_loss arguments must be equal-length and non-empty");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < y_hat.size(); ++i) {
    const double lam = lambda[i];
    if (!(lam >= 0.0 && lam <= 1.0)) {
      throw InvalidParameterError("lambda must lie in [0,1]");
    }
    acc += lam * bce_loss(y_hat[i], y_m[i]) + (1.0 - lam) * bce_loss(y_hat[i], y_n[i]);
  }
  return acc / static_cast<double>(y_hat.size());
}

}  // namespace auscult
