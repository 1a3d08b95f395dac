// auscult/numerics/gradcheck.cpp
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

#include "auscult/numerics/gradcheck.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "auscult/error.hpp"

namespace auscult {

GradCheckReport finite_difference_check(const std::function<double()>& f,
                                        const std::vector<Matrix*>& params,
                                        const std::vector<const Matrix*>& analytic_grads,
                                        double h, double tolerance,
                                        int max_coords_per_tensor, Rng* rng) {
  if (params.size() != analytic_grads.size()) {
    throw InvalidParameterError("finite_difference_check: params/grads count mismatch");
  }
  if (!(h >= 1e-6 && h <= 1e-4)) {
    throw InvalidParameterError("finite_difference_check: h outside [1e-6, 1e-4]");
  }
  if (max_coords_per_tensor < 1) {
    throw InvalidParameterError("finite_difference_check: max_coords_per_tensor < 1");
  }

  GradCheckReport report;
  report.tolerance = tolerance;
  report.per_param_errors.assign(params.size(), 0.0);
  std::size_t worst_tensor = 0;
  std::size_t worst_coord = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;

  for (std::size_t p = 0; p < params.size(); ++p) {
    Matrix& theta = *params[p];
    const Matrix& grad = *analytic_grads[p];
    if (!theta.same_shape(grad)) {
      throw InvalidParameterError("finite_difference_check: tensor/grad shape mismatch");
    }

    std::vector<std::size_t> coords;
    const std::size_t n = theta.size();
    if (n <= static_cast<std::size_t>(max_coords_per_tensor)) {
      coords.resize(n);
      for (std::size_t i = 0; i < n; ++i) coords[i] = i;
    } else {
      if (rng == nullptr) {
        throw InvalidParameterError(
            "finite_difference_check: rng required to subsample a large tensor");
      }
      std::vector<int> perm = rng->permutation(static_cast<int>(n));
      coords.assign(perm.begin(), perm.begin() + max_coords_per_tensor);
    }

    for (std::size_t idx : coords) {
      const double saved = theta.at_flat(idx);
      theta.at_flat(idx) = saved + h;
      const double f_plus = f();
      theta.at_flat(idx) = saved - h;
      const double f_minus = f();
      theta.at_flat(idx) = saved;

      if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
        std::ostringstream oss;
        oss << "non-finite probe at tensor " << p << " coord " << idx
            << " (f+: " << f_plus << ", f-: " << f_minus << ")";
        report.diagnostic = oss.str();
        report.max_rel_error = std::numeric_limits<double>::infinity();
        report.passed = false;
        return report;
      }

      const double numeric = (f_plus - f_minus) / (2.0 * h);
      const double analytic = grad.at_flat(idx);
      const double denom =
          std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
      const double rel = std::fabs(analytic - numeric) / denom;
      if (rel > report.per_param_errors[p]) report.per_param_errors[p] = rel;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        worst_tensor = p;
        worst_coord = idx;
        worst_analytic = analytic;
        worst_numeric = numeric;
      }
    }
  }

  report.passed = report.max_rel_error <= tolerance;
  if (!report.passed) {
    std::ostringstream oss;
    oss << "worst coordinate: tensor " << worst_tensor << " coord " << worst_coord
        << " (analytic " << worst_analytic << ", central difference " << worst_numeric
        << ", rel error " << report.max_rel_error << ")";
    report.diagnostic = oss.str();
  }
  return report;
}

}  // namespace auscult
