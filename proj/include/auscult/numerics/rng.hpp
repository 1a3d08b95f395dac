// auscult/numerics/rng.hpp
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

#include <cstdint>
#include <random>
#include <vector>

namespace auscult {

// Deterministic random source.  The engine is std::mt19937_64 (its output
// sequence is pinned by the standard); every distribution on top of it is
// implemented here because the std::*_distribution classes are
// implementation-defined and would break bit-exact reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform();
  // Uniform in (0, 1]; safe as a log() argument.
  double uniform_open();
  double uniform(double lo, double hi);
  // Uniform integer in [0, n).
  int uniform_int(int n);

  // Standard normal via Box-Muller; the second variate is cached.
  double normal();

  // Gamma(alpha, 1) via the Marsaglia-Tsang squeeze; alpha < 1 uses the
  // boost Gamma(alpha+1) * U^(1/alpha).
  double gamma(double alpha);

  // Fisher-Yates permutation of 0..n-1.
  std::vector<int> permutation(int n);

  // Independent child stream; parallel and serial consumers of children
  // see identical draws.
  Rng child(std::uint64_t stream) const;

 private:
  std::uint64_t seed_ = 0;
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_normal_ = false;
};

// Beta(alpha, alpha) as g1 / (g1 + g2) with g ~ Gamma(alpha, 1).
double sample_beta(double alpha, Rng& rng);

// Symmetric Dirichlet(gamma) over h components: normalized gamma draws.
std::vector<double> sample_dirichlet(double gamma, int h, Rng& rng);

}  // namespace auscult
