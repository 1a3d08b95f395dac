// auscult/fusion/fuse.cpp
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

#include "auscult/fusion/fuse.hpp"

#include <cmath>
#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "auscult/error.hpp"
#include "auscult/fusion/auc.hpp"

namespace auscult {
namespace {

constexpr double kSimplexTol = 1e-12;

void validate_simplex(const std::vector<double>& a, std::size_t n_models) {
  if (a.size() != n_models) {
    throw InvalidParameterError("fusion weights count " + std::to_string(a.size()) +
                                " does not match model count " + std::to_string(n_models));
  }
  double sum = 0.0;
  for (double w : a) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidParameterError("fusion weights must be finite and non-negative");
    }
    sum += w;
  }
  if (std::fabs(sum - 1.0) > kSimplexTol) {
    throw InvalidParameterError("fusion weights must sum to 1, got " + std::to_string(sum));
  }
}

// Z-scored per-model score columns, aligned to the first table's id order.
// Both fuse() and search_weights() go through here so a winning draw, when
// re-applied via fuse(), reproduces its search-time scores bitwise.
struct AlignedScores {
  std::vector<std::string> ids;          // row order (first table's order)
  std::vector<std::vector<double>> z;    // [model][row]
  std::vector<int> labels;               // empty when the tables carry none
};

AlignedScores align_and_zscore(const std::vector<ScoreTable>& tables) {
  if (tables.empty()) {
    throw InvalidParameterError("fusion needs at least one score table");
  }
  for (const ScoreTable& t : tables) t.validate();

  const ScoreTable& base = tables.front();
  const std::size_t n = base.rows.size();

  AlignedScores out;
  out.ids.reserve(n);
  for (const ScoreRow& r : base.rows) out.ids.push_back(r.id);

  const bool labeled = base.has_labels();
  if (labeled) {
    out.labels.reserve(n);
    for (const ScoreRow& r : base.rows) out.labels.push_back(*r.label);
  }

  out.z.reserve(tables.size());
  out.z.push_back(zscore(base.scores()));

  for (std::size_t t = 1; t < tables.size(); ++t) {
    const ScoreTable& tab = tables[t];
    if (tab.has_labels() != labeled) {
      throw AlignmentError("score table '" + tab.model_tag + "' disagrees with '" +
                           base.model_tag + "' on label presence");
    }
    std::unordered_map<std::string, std::size_t> index;
    index.reserve(tab.rows.size());
    for (std::size_t i = 0; i < tab.rows.size(); ++i) index.emplace(tab.rows[i].id, i);

    std::vector<double> col(n, 0.0);
    std::string missing;
    const std::vector<double> ztab = zscore(tab.scores());
    for (std::size_t i = 0; i < n; ++i) {
      auto it = index.find(out.ids[i]);
      if (it == index.end()) {
        if (!missing.empty()) missing += ", ";
        missing += out.ids[i];
        continue;
      }
      col[i] = ztab[it->second];
      if (labeled && *tab.rows[it->second].label != out.labels[i]) {
        throw AlignmentError("score tables disagree on the label of id '" + out.ids[i] + "'");
      }
    }
    if (!missing.empty()) {
      throw AlignmentError("score table '" + tab.model_tag + "' is missing ids: " + missing);
    }
    if (tab.rows.size() != n) {
      throw AlignmentError("score table '" + tab.model_tag + "' has " +
                           std::to_string(tab.rows.size()) + " rows, expected " +
                           std::to_string(n));
    }
    out.z.push_back(std::move(col));
  }
  return out;
}

std::vector<double> combine(const AlignedScores& aligned, const std::vector<double>& a) {
  const std::size_t n = aligned.ids.size();
  std::vector<double> fused(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t h = 0; h < a.size(); ++h) acc += a[h] * aligned.z[h][i];
    fused[i] = acc;
  }
  return fused;
}

}  // namespace

std::vector<double> zscore(const std::vector<double>& v) {
  if (v.size() < 2) {
    throw InvalidParameterError("zscore needs at least 2 values, got " +
                                std::to_string(v.size()));
  }
  double mean = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidParameterError("zscore input must be finite");
    mean += x;
  }
  mean /= static_cast<double>(v.size());

  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= static_cast<double>(v.size());
  if (var <= 0.0) {
    throw DegenerateScoresError("cannot z-score a constant score column");
  }
  const double sd = std::sqrt(var);

  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - mean) / sd;
  return out;
}

ScoreTable fuse(const std::vector<ScoreTable>& tables, const std::vector<double>& weights) {
  const AlignedScores aligned = align_and_zscore(tables);
  validate_simplex(weights, tables.size());
  const std::vector<double> fused = combine(aligned, weights);

  ScoreTable out;
  out.model_tag = "fused";
  out.rows.reserve(aligned.ids.size());
  for (std::size_t i = 0; i < aligned.ids.size(); ++i) {
    ScoreRow row;
    row.id = aligned.ids[i];
    row.score = fused[i];
    if (!aligned.labels.empty()) row.label = aligned.labels[i];
    out.rows.push_back(std::move(row));
  }
  return out;
}

FusionWeights search_weights(const std::vector<std::vector<ScoreTable>>& tables,
                             double gamma, int n_samples, Rng& rng,
                             std::ostream* report) {
  if (tables.empty()) throw InvalidParameterError("weight search needs at least one fold");
  if (n_samples < 1) {
    throw InvalidParameterError("weight search needs at least 1 draw, got " +
                                std::to_string(n_samples));
  }
  if (!(gamma > 0.0)) {
    throw InvalidParameterError("Dirichlet concentration must be positive");
  }

  const std::size_t n_models = tables.front().size();
  if (n_models < 2) {
    throw InvalidParameterError("weight search needs at least two models, got " +
                                std::to_string(n_models));
  }
  std::vector<AlignedScores> folds;
  folds.reserve(tables.size());
  for (std::size_t f = 0; f < tables.size(); ++f) {
    if (tables[f].size() != n_models) {
      throw InvalidParameterError("fold " + std::to_string(f) + " has " +
                                  std::to_string(tables[f].size()) + " score tables, expected " +
                                  std::to_string(n_models));
    }
    folds.push_back(align_and_zscore(tables[f]));
    if (folds.back().labels.empty()) {
      throw InvalidParameterError("weight search needs labeled score tables (fold " +
                                  std::to_string(f) + " has none)");
    }
    // Surfaces single-class folds before the parallel sweep starts.
    auc(combine(folds.back(), std::vector<double>(n_models, 1.0 / static_cast<double>(n_models))),
        folds.back().labels);
  }

  std::vector<std::vector<double>> draws(static_cast<std::size_t>(n_samples));
  std::vector<double> mean_aucs(static_cast<std::size_t>(n_samples), 0.0);

  // Each draw owns its output slots and its own child stream, so the sweep is
  // order-independent and matches the serial result bitwise.
#pragma omp parallel for schedule(static)
  for (int d = 0; d < n_samples; ++d) {
    Rng draw_rng = rng.child(static_cast<std::uint64_t>(d));
    const std::vector<double> a =
        sample_dirichlet(gamma, static_cast<int>(n_models), draw_rng);
    double acc = 0.0;
    for (const AlignedScores& fold : folds) {
      acc += auc(combine(fold, a), fold.labels);
    }
    draws[static_cast<std::size_t>(d)] = a;
    mean_aucs[static_cast<std::size_t>(d)] = acc / static_cast<double>(folds.size());
  }

  int best = 0;
  for (int d = 1; d < n_samples; ++d) {
    if (mean_aucs[static_cast<std::size_t>(d)] > mean_aucs[static_cast<std::size_t>(best)]) {
      best = d;
    }
  }

  if (report != nullptr) {
    std::ostringstream head;
    head << "draw,mean_auc";
    for (std::size_t h = 0; h < n_models; ++h) head << ",w" << h;
    *report << head.str() << "\n";
    report->precision(17);
    for (int d = 0; d < n_samples; ++d) {
      *report << d << ',' << mean_aucs[static_cast<std::size_t>(d)];
      for (double w : draws[static_cast<std::size_t>(d)]) *report << ',' << w;
      *report << "\n";
    }
    *report << "# winner draw=" << best << " mean_auc="
            << mean_aucs[static_cast<std::size_t>(best)] << "\n";
  }

  FusionWeights out;
  out.a = draws[static_cast<std::size_t>(best)];
  out.gamma = gamma;
  out.n_samples = n_samples;
  out.chosen_auc = mean_aucs[static_cast<std::size_t>(best)];
  return out;
}

}  // namespace auscult
