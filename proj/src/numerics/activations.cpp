// auscult/numerics/activations.cpp
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

#include "auscult/numerics/activations.hpp"

#include <algorithm>
#include <cmath>

#include "auscult/error.hpp"

namespace auscult {

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> softmax_with_temperature(std::span<const double> z, double tau) {
  if (!(tau > 0.0)) {
    throw InvalidParameterError("softmax_with_temperature: tau must be > 0");
  }
  if (z.empty()) {
    throw InvalidParameterError("softmax_with_temperature: empty input");
  }
  const double m = *std::max_element(z.begin(), z.end());
  std::vector<double> y(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    y[i] = std::exp((z[i] - m) / tau);
    sum += y[i];
  }
  for (double& v : y) v /= sum;
  return y;
}

double bce_loss(double y_hat, double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw InvalidParameterError("bce_loss: target outside [0, 1]");
  }
  const double p = std::clamp(y_hat, kBceEps, 1.0 - kBceEps);
  return -(y * std::log(p) + (1.0 - y) * std::log(1.0 - p));
}

double bce_loss_dyhat(double y_hat, double y) {
  if (!(y >= 0.0 && y <= 1.0)) {
    throw InvalidParameterError("bce_loss_dyhat: target outside [0, 1]");
  }
  if (y_hat <= kBceEps || y_hat >= 1.0 - kBceEps) return 0.0;
  return -y / y_hat + (1.0 - y) / (1.0 - y_hat);
}

}  // namespace auscult
