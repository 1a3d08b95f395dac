// auscult/fusion/auc.cpp
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

#include "auscult/fusion/auc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "auscult/error.hpp"

namespace auscult {

namespace {

void validate(const std::vector<double>& scores, const std::vector<int>& labels,
              long& n_pos) {
  if (scores.empty() || scores.size() != labels.size()) {
    throw InvalidParameterError("auc needs equal-length non-empty scores/labels");
  }
  n_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!std::isfinite(scores[i])) throw InvalidParameterError("auc scores must be finite");
    if (labels[i] != 0 && labels[i] != 1) {
      throw InvalidParameterError("auc labels must be 0/1");
    }
    n_pos += labels[i];
  }
  if (n_pos == 0 || n_pos == static_cast<long>(labels.size())) {
    throw DegenerateLabelError("auc needs both classes present");
  }
}

}  // namespace

double auc(const std::vector<double>& scores, const std::vector<int>& labels) {
  long n_pos = 0;
  validate(scores, labels, n_pos);
  const std::size_t n = scores.size();
  const long n_neg = static_cast<long>(n) - n_pos;

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return scores[static_cast<size_t>(a)] < scores[static_cast<size_t>(b)];
  });

  // Midranks: every member of a tie group gets the group's average 1-based
  // rank, so ties contribute exactly one half per pair.
  double pos_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[static_cast<size_t>(idx[j])] == scores[static_cast<size_t>(idx[i])]) {
      ++j;
    }
    const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) {
      if (labels[static_cast<size_t>(idx[k])] == 1) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double n_pos_d = static_cast<double>(n_pos);
  return (pos_rank_sum - n_pos_d * (n_pos_d + 1.0) / 2.0) /
         (n_pos_d * static_cast<double>(n_neg));
}

double auc_bruteforce(const std::vector<double>& scores, const std::vector<int>& labels) {
  long n_pos = 0;
  validate(scores, labels, n_pos);
  const std::size_t n = scores.size();
  double wins = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    if (labels[p] != 1) continue;
    for (std::size_t q = 0; q < n; ++q) {
      if (labels[q] != 0) continue;
      if (scores[p] > scores[q]) {
        wins += 1.0;
      } else if (scores[p] == scores[q]) {
        wins += 0.5;
      }
    }
  }
  return wins / (static_cast<double>(n_pos) *
                 static_cast<double>(static_cast<long>(n) - n_pos));
}

}  // namespace auscult
