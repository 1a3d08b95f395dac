// auscult/numerics/rng.cpp
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

#include "auscult/numerics/rng.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "auscult/error.hpp"

namespace auscult {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

int Rng::uniform_int(int n) {
  if (n <= 0) throw InvalidParameterError("Rng::uniform_int: n must be positive");
  return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
}

double Rng::normal() {
  if (has_spare_normal_) {
    has_spare_normal_ = false;
    return spare_normal_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(a);
  has_spare_normal_ = true;
  return r * std::cos(a);
}

double Rng::gamma(double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameterError("Rng::gamma: alpha must be > 0");
  if (alpha < 1.0) {
    const double g = gamma(alpha + 1.0);
    return g * std::pow(uniform_open(), 1.0 / alpha);
  }
  const double d = alpha - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

std::vector<int> Rng::permutation(int n) {
  if (n < 0) throw InvalidParameterError("Rng::permutation: n must be >= 0");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = uniform_int(i + 1);
    std::swap(p[i], p[j]);
  }
  return p;
}

Rng Rng::child(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x5851F42D4C957F2Dull)));
}

double sample_beta(double alpha, Rng& rng) {
  if (!(alpha > 0.0)) throw InvalidParameterError("sample_beta: alpha must be > 0");
  for (;;) {
    const double g1 = rng.gamma(alpha);
    const double g2 = rng.gamma(alpha);
    const double s = g1 + g2;
    if (s > 0.0) return g1 / s;  // tiny alpha can underflow both draws
  }
}

std::vector<double> sample_dirichlet(double gamma, int h, Rng& rng) {
  if (!(gamma > 0.0)) throw InvalidParameterError("sample_dirichlet: gamma must be > 0");
  if (h < 1) throw InvalidParameterError("sample_dirichlet: h must be >= 1");
  std::vector<double> v(h);
  for (;;) {
    double s = 0.0;
    for (int i = 0; i < h; ++i) {
      v[i] = rng.gamma(gamma);
      s += v[i];
    }
    if (s > 0.0) {
      for (int i = 0; i < h; ++i) v[i] /= s;
      return v;
    }
  }
}

}  // namespace auscult
