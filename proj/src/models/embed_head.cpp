// auscult/models/embed_head.cpp
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

#include "auscult/models/embed_head.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "auscult/error.hpp"
#include "auscult/numerics/activations.hpp"

namespace auscult {

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.rows() < 2) throw InvalidParameterError("standardizer needs at least 2 samples");
  Standardizer s;
  s.mean.assign(x.cols(), 0.0);
  s.std_dev.assign(x.cols(), 0.0);
  for (int j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    for (int i = 0; i < x.rows(); ++i) sum += x(i, j);
    const double mean = sum / x.rows();
    double sq = 0.0;
    for (int i = 0; i < x.rows(); ++i) {
      const double d = x(i, j) - mean;
      sq += d * d;
    }
    const double sd = std::sqrt(sq / x.rows());
    s.mean[j] = mean;
    s.std_dev[j] = sd > 0.0 ? sd : 1.0;
  }
  return s;
}

std::vector<double> Standardizer::apply(const std::vector<double>& v) const {
  if (v.size() != mean.size()) {
    throw InvalidParameterError("standardizer dim mismatch: got " +
                                std::to_string(v.size()) + ", fit on " +
                                std::to_string(mean.size()));
  }
  std::vector<double> out(v.size());
  for (size_t j = 0; j < v.size(); ++j) out[j] = (v[j] - mean[j]) / std_dev[j];
  return out;
}

Matrix Standardizer::apply(const Matrix& x) const {
  if (static_cast<size_t>(x.cols()) != mean.size()) {
    throw InvalidParameterError("standardizer dim mismatch");
  }
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    for (int j = 0; j < x.cols(); ++j) out(i, j) = (x(i, j) - mean[j]) / std_dev[j];
  }
  return out;
}

namespace {

// Cyclic Jacobi eigendecomposition of a symmetric matrix.  vecs columns are
// the eigenvectors of a; vals the matching eigenvalues (unsorted).
void jacobi_eigh(Matrix a, Matrix& vecs, std::vector<double>& vals) {
  const int n = a.rows();
  vecs = Matrix(n, n);
  for (int i = 0; i < n; ++i) vecs(i, i) = 1.0;
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-24) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = vecs(k, p);
          const double vkq = vecs(k, q);
          vecs(k, p) = c * vkp - s * vkq;
          vecs(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  vals.assign(n, 0.0);
  for (int i = 0; i < n; ++i) vals[static_cast<size_t>(i)] = a(i, i);
}

}  // namespace

PcaModel pca_fit(const Matrix& x, int n) {
  if (x.rows() < 2) throw InvalidParameterError("pca_fit needs at least 2 samples");
  if (n < 1 || n > x.cols()) {
    throw InvalidParameterError("pca components must lie in [1, dim=" +
                                std::to_string(x.cols()) + "], got " + std::to_string(n));
  }
  const int dim = x.cols();
  std::vector<double> mean(dim, 0.0);
  for (int j = 0; j < dim; ++j) {
    double sum = 0.0;
    for (int i = 0; i < x.rows(); ++i) sum += x(i, j);
    mean[static_cast<size_t>(j)] = sum / x.rows();
  }
  Matrix cov(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = j; k < dim; ++k) {
      double acc = 0.0;
      for (int i = 0; i < x.rows(); ++i) {
        acc += (x(i, j) - mean[static_cast<size_t>(j)]) *
               (x(i, k) - mean[static_cast<size_t>(k)]);
      }
      const double v = acc / (x.rows() - 1);
      cov(j, k) = v;
      cov(k, j) = v;
    }
  }
  Matrix vecs;
  std::vector<double> vals;
  jacobi_eigh(cov, vecs, vals);
  std::vector<int> order(vals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return vals[static_cast<size_t>(a)] > vals[static_cast<size_t>(b)];
  });
  PcaModel pca;
  pca.basis = Matrix(dim, n);
  pca.explained_variance.assign(static_cast<size_t>(n), 0.0);
  for (int c = 0; c < n; ++c) {
    const int src = order[static_cast<size_t>(c)];
    // Deterministic sign: largest-magnitude entry is positive.
    int peak = 0;
    for (int r = 1; r < dim; ++r) {
      if (std::abs(vecs(r, src)) > std::abs(vecs(peak, src))) peak = r;
    }
    const double flip = vecs(peak, src) < 0.0 ? -1.0 : 1.0;
    for (int r = 0; r < dim; ++r) pca.basis(r, c) = flip * vecs(r, src);
    pca.explained_variance[static_cast<size_t>(c)] = vals[static_cast<size_t>(src)];
  }
  return pca;
}

Matrix pca_project(const Matrix& x, const PcaModel& pca) {
  if (x.cols() != pca.basis.rows()) throw InvalidParameterError("pca dim mismatch");
  return matmul(x, pca.basis);
}

namespace {

// log(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

struct LogregObjective {
  const Matrix& x;
  const std::vector<int>& y;
  const std::vector<double>& sample_weight;
  double c_reg;

  double loss(const std::vector<double>& w, double b) const {
    double data = 0.0;
    for (int i = 0; i < x.rows(); ++i) {
      double z = b;
      for (int j = 0; j < x.cols(); ++j) z += w[static_cast<size_t>(j)] * x(i, j);
      // bce(sigmoid(z), y) = softplus(z) - y*z, exact in logit form.
      data += sample_weight[static_cast<size_t>(i)] *
              (softplus(z) - y[static_cast<size_t>(i)] * z);
    }
    data /= x.rows();
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return data + 0.5 * reg / c_reg;
  }

  // Returns gradient norm; fills gw/gb.
  double grad(const std::vector<double>& w, double b, std::vector<double>& gw,
              double& gb) const {
    gw.assign(w.size(), 0.0);
    gb = 0.0;
    for (int i = 0; i < x.rows(); ++i) {
      double z = b;
      for (int j = 0; j < x.cols(); ++j) z += w[static_cast<size_t>(j)] * x(i, j);
      const double resid = sample_weight[static_cast<size_t>(i)] *
                           (sigmoid(z) - y[static_cast<size_t>(i)]);
      for (int j = 0; j < x.cols(); ++j) gw[static_cast<size_t>(j)] += resid * x(i, j);
      gb += resid;
    }
    double norm_sq = 0.0;
    for (size_t j = 0; j < gw.size(); ++j) {
      gw[j] = gw[j] / x.rows() + w[j] / c_reg;
      norm_sq += gw[j] * gw[j];
    }
    gb /= x.rows();
    norm_sq += gb * gb;
    return std::sqrt(norm_sq);
  }
};

}  // namespace

LogregModel logreg_train(const Matrix& x, const std::vector<int>& y, double c_reg,
                         ClassWeight weighting, Rng& rng) {
  if (x.rows() < 2 || static_cast<size_t>(x.rows()) != y.size()) {
    throw InvalidParameterError("logreg needs >= 2 samples with matching labels");
  }
  if (!(c_reg > 0.0)) throw InvalidParameterError("logreg C must be positive");
  int n_pos = 0;
  for (int v : y) {
    if (v != 0 && v != 1) throw InvalidParameterError("logreg labels must be 0/1");
    n_pos += v;
  }
  const int n_neg = x.rows() - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw DegenerateLabelError("logreg saw a single class; both labels required");
  }
  std::vector<double> sample_weight(static_cast<size_t>(x.rows()), 1.0);
  if (weighting == ClassWeight::balanced) {
    const double w_pos = x.rows() / (2.0 * n_pos);
    const double w_neg = x.rows() / (2.0 * n_neg);
    for (int i = 0; i < x.rows(); ++i) {
      sample_weight[static_cast<size_t>(i)] = y[static_cast<size_t>(i)] == 1 ? w_pos : w_neg;
    }
  }

  LogregModel model;
  model.c_reg = c_reg;
  model.weighting = weighting;
  model.w.assign(static_cast<size_t>(x.cols()), 0.0);
  for (double& v : model.w) v = rng.uniform(-1e-3, 1e-3);
  model.b = 0.0;

  const LogregObjective obj{x, y, sample_weight, c_reg};
  double cur = obj.loss(model.w, model.b);
  model.loss_history.push_back(cur);
  std::vector<double> gw;
  double gb = 0.0;
  std::vector<double> trial_w(model.w.size());
  for (int it = 0; it < kLogregMaxIters; ++it) {
    const double gnorm = obj.grad(model.w, model.b, gw, gb);
    if (gnorm < kLogregGradTol) {
      model.converged = true;
      break;
    }
    // Armijo backtracking along the steepest-descent direction.
    double step = 1.0;
    const double slope = gnorm * gnorm;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (size_t j = 0; j < model.w.size(); ++j) trial_w[j] = model.w[j] - step * gw[j];
      const double trial_b = model.b - step * gb;
      const double trial = obj.loss(trial_w, trial_b);
      if (trial <= cur - 1e-4 * step * slope) {
        model.w = trial_w;
        model.b = trial_b;
        cur = trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step shrank to numerical irrelevance
    model.loss_history.push_back(cur);
    model.iterations = it + 1;
  }
  return model;
}

double logreg_score(const LogregModel& model, const std::vector<double>& v) {
  if (v.size() != model.w.size()) throw InvalidParameterError("logreg dim mismatch");
  double z = model.b;
  for (size_t j = 0; j < v.size(); ++j) z += model.w[j] * v[j];
  return sigmoid(z);
}

EmbeddingHead EmbeddingHead::fit(const Matrix& x, const std::vector<int>& y,
                                 int n_components, double c_reg, ClassWeight weighting,
                                 Rng& rng) {
  EmbeddingHead head;
  head.scaler = Standardizer::fit(x);
  const Matrix scaled = head.scaler.apply(x);
  head.pca = pca_fit(scaled, n_components);
  const Matrix projected = pca_project(scaled, head.pca);
  head.clf = logreg_train(projected, y, c_reg, weighting, rng);
  return head;
}

double EmbeddingHead::score(const std::vector<double>& embedding) const {
  const std::vector<double> scaled = scaler.apply(embedding);
  Matrix row(1, static_cast<int>(scaled.size()));
  for (size_t j = 0; j < scaled.size(); ++j) row(0, static_cast<int>(j)) = scaled[j];
  const Matrix projected = pca_project(row, pca);
  std::vector<double> p(static_cast<size_t>(projected.cols()));
  for (int j = 0; j < projected.cols(); ++j) p[static_cast<size_t>(j)] = projected(0, j);
  return logreg_score(clf, p);
}

}  // namespace auscult
