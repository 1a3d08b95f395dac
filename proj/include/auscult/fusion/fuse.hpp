// auscult/fusion/fuse.hpp
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
// Score-level fusion: z-score each model's scores, combine with simplex
// weights, and search the weights by symmetric-Dirichlet sampling against
// mean validation AUC across folds.

#pragma once

#include <iosfwd>
#include <vector>

#include "auscult/fusion/score_table.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

// (v - mean) / std with population std.  Output has mean 0 and unit std up to
// rounding.  Throws InvalidParameterError when |v| < 2, DegenerateScoresError
// on zero variance.
std::vector<double> zscore(const std::vector<double>& v);

struct FusionWeights {
  std::vector<double> a;   // simplex weights, one per model
  double gamma = 0.0;      // Dirichlet concentration used in the search
  int n_samples = 0;       // draws evaluated
  double chosen_auc = 0.0; // mean fold AUC of the winning draw
};

// Weighted sum of per-table z-scored scores, id-aligned to the first table's
// row order.  Labels (when present) must agree across tables and are carried
// through.  Throws AlignmentError naming the missing ids when the tables do
// not cover identical id sets; InvalidParameterError when the weights leave
// the simplex.
ScoreTable fuse(const std::vector<ScoreTable>& tables, const std::vector<double>& weights);

// Draws n_samples weight vectors from Dir(gamma), scores each by the mean
// fold AUC of the fused validation tables, and returns the best draw
// (first-drawn wins ties).  tables[fold][model] must all carry labels and
// every fold must contain both classes.  Each draw consumes its own child
// stream of rng, so parallel and serial evaluation pick identical weights.
// When report is non-null, writes CSV rows `draw,mean_auc,w0,...` plus a
// trailing `# winner ...` comment line.
FusionWeights search_weights(const std::vector<std::vector<ScoreTable>>& tables,
                             double gamma, int n_samples, Rng& rng,
                             std::ostream* report = nullptr);

}  // namespace auscult
