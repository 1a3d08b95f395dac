// auscult/models/embed_head.hpp
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
// Classifier head for externally produced embedding vectors:
// standardize -> PCA -> L2-regularized logistic regression.

#pragma once

#include <vector>

#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

// Per-dimension mean/std scaler.  Population std; a constant dimension gets
// std 1 so it maps to exactly zero instead of dividing by zero.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> std_dev;

  static Standardizer fit(const Matrix& x);  // x: samples x dim, needs >= 2 rows
  std::vector<double> apply(const std::vector<double>& v) const;
  Matrix apply(const Matrix& x) const;
};

// Orthonormal basis of the top-n covariance eigenvectors (columns), with the
// matching eigenvalues in nonincreasing order.
struct PcaModel {
  Matrix basis;  // dim x n
  std::vector<double> explained_variance;
};

// Mean-centers x (samples x dim), eigendecomposes the sample covariance with
// cyclic Jacobi rotations, keeps the n leading components.  Each eigenvector's
// sign is fixed so its largest-magnitude entry is positive.
// Throws InvalidParameterError when n > dim or fewer than 2 samples.
PcaModel pca_fit(const Matrix& x, int n);

Matrix pca_project(const Matrix& x, const PcaModel& pca);  // samples x n

enum class ClassWeight { none, balanced };

struct LogregModel {
  std::vector<double> w;
  double b = 0.0;
  double c_reg = 1.0;
  ClassWeight weighting = ClassWeight::none;
  std::vector<double> loss_history;  // loss after each accepted step, index 0 = initial
  int iterations = 0;
  bool converged = false;  // gradient norm fell below kLogregGradTol
};

inline constexpr double kLogregGradTol = 1e-6;
inline constexpr int kLogregMaxIters = 10000;

// Full-batch gradient descent with Armijo backtracking on
//   (1/N) sum_i omega_i * bce(sigmoid(w.x_i + b), y_i)  +  (1/c_reg) * 0.5*||w||^2
// where omega_i = 1 (none) or N / (2 * N_class(y_i)) (balanced).  The bias is
// not regularized.  Stops when the gradient norm drops below kLogregGradTol
// or after kLogregMaxIters accepted steps.
// Throws DegenerateLabelError when y holds a single class.
LogregModel logreg_train(const Matrix& x, const std::vector<int>& y, double c_reg,
                         ClassWeight weighting, Rng& rng);

// Positive-class probability for one already-preprocessed row.
double logreg_score(const LogregModel& model, const std::vector<double>& v);

// The full head: owns the preprocessing it was fit with.
struct EmbeddingHead {
  Standardizer scaler;
  PcaModel pca;
  LogregModel clf;

  static EmbeddingHead fit(const Matrix& x, const std::vector<int>& y, int n_components,
                           double c_reg, ClassWeight weighting, Rng& rng);
  double score(const std::vector<double>& embedding) const;
};

}  // namespace auscult
