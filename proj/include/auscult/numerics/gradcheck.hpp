// auscult/numerics/gradcheck.hpp
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

#include <functional>
#include <string>
#include <vector>

#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::vector<double> per_param_errors;  // max rel error per tensor
  double tolerance = 0.0;
  bool passed = false;       // passed <=> max_rel_error <= tolerance
  std::string diagnostic;    // non-empty on failure: the worst coordinate,
                             // or the probe that came back non-finite
};

// Central-difference check of analytic gradients.  f() re-evaluates the loss
// with the current contents of `params`; each checked coordinate is perturbed
// by +/-h and restored.  Tensors larger than max_coords_per_tensor are
// subsampled (without replacement) using `rng`.  Relative error is
// |a - n| / max(|a|, |n|, 1e-8).
GradCheckReport finite_difference_check(const std::function<double()>& f,
                                        const std::vector<Matrix*>& params,
                                        const std::vector<const Matrix*>& analytic_grads,
                                        double h, double tolerance,
                                        int max_coords_per_tensor = 200,
                                        Rng* rng = nullptr);

}  // namespace auscult
