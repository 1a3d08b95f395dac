// auscult/fusion/auc.hpp
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

#include <vector>

namespace auscult {

// Ranking AUC: probability that a random positive outscores a random
// negative, ties counting one half.  O(N log N) via midranks.
// Throws DegenerateLabelError unless both classes appear at least once,
// InvalidParameterError on size mismatch, empty input, non-binary labels, or
// non-finite scores.
double auc(const std::vector<double>& scores, const std::vector<int>& labels);

// O(N^2) oracle over all positive-negative pairs:
// (#concordant + 0.5 * #tied) / (#pos * #neg).  Kept as the reference the
// fast kernel is tested against exactly.
double auc_bruteforce(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace auscult
