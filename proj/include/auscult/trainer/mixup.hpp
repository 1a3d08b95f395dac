// auscult/trainer/mixup.hpp
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
//
// Convex-combination data augmentation: each sample is blended with a
// shuffled partner, x' = lam*x + (1-lam)*x_partner, and the loss mixes the two
// source labels with the same coefficient.

#pragma once

#include <optional>
#include <vector>

#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

struct MiniBatch {
  std::vector<Matrix> x;       // blended inputs
  std::vector<int> y;          // original binary labels (the lam side)
  std::vector<double> lambda;  // per-sample blend weight in [0,1]
  std::vector<int> perm;       // partner assignment: sample i pairs with perm[i]

  int partner_label(int i) const { return y[static_cast<size_t>(perm[static_cast<size_t>(i)])]; }
  double mixed_label(int i) const {
    const double lam = lambda[static_cast<size_t>(i)];
    return lam * y[static_cast<size_t>(i)] + (1.0 - lam) * partner_label(i);
  }
};

// Draws lambda_i ~ Beta(alpha, alpha) per sample (in index order), then one
// shuffle permutation shared by inputs and labels.  force_lambda skips the
// Beta draws and uses the given value for every sample; the permutation is
// still drawn, keeping the rng stream layout identical.
// Throws BatchTooSmallError when fewer than 2 samples, InvalidParameterError
// on alpha <= 0 or shape-mismatched inputs.
MiniBatch mixup_batch(const std::vector<Matrix>& x, const std::vector<int>& y,
                      double alpha, Rng& rng,
                      std::optional<double> force_lambda = std::nullopt);

// Mean over samples of lam*bce(y_hat, y_m) + (1-lam)*bce(y_hat, y_n).
// Equals plain BCE against the blended label lam*y_m + (1-lam)*y_n because
// BCE is affine in the label.
double mixup_loss(const std::vector<double>& y_hat, const std::vector<int>& y_m,
                  const std::vector<int>& y_n, const std::vector<double>& lambda);

}  // namespace auscult
