// auscult/fusion/score_table.hpp
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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace auscult {

struct ScoreRow {
  std::string id;
  double score = 0.0;
  std::optional<int> label;  // 0/1 when known
};

// Per-model score list.  Ids are unique, scores finite; labels are either
// present on every row or absent on every row.
struct ScoreTable {
  std::string model_tag;
  std::vector<ScoreRow> rows;

  bool has_labels() const;
  std::vector<double> scores() const;
  std::vector<int> labels() const;  // InvalidParameterError when unlabeled

  // Enforces the invariants above; called by readers and writers.
  void validate() const;
};

// CSV with required header `id,score` or `id,score,label`.  Scores are
// written with 17 significant digits so a round trip is value-exact.
ScoreTable read_score_table(const std::filesystem::path& path);
void write_score_table(const std::filesystem::path& path, const ScoreTable& table);

}  // namespace auscult
