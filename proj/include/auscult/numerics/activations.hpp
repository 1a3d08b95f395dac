// auscult/numerics/activations.hpp
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

#include <span>
#include <vector>

namespace auscult {

// Probability clamp used inside the binary cross-entropy.
inline constexpr double kBceEps = 1e-7;

// Numerically stable logistic; saturates to 0/1 without overflow.
double sigmoid(double x);

// softmax(z/tau) with max subtraction.  tau must be > 0.
std::vector<double> softmax_with_temperature(std::span<const double> z, double tau);

// Binary cross-entropy of a predicted probability y_hat against a (possibly
// fractional) target y in [0,1].  y_hat is clamped to [kBceEps, 1-kBceEps]
// before the logs.
double bce_loss(double y_hat, double y);

// d bce_loss / d y_hat.  The clamp is part of the functional form, so the
// derivative is exactly 0 outside the open clamp interval.
double bce_loss_dyhat(double y_hat, double y);

}  // namespace auscult
