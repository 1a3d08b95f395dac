// auscult/fusion/score_table.cpp
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

#include "auscult/fusion/score_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "auscult/error.hpp"

namespace auscult {

bool ScoreTable::has_labels() const {
  return !rows.empty() && rows.front().label.has_value();
}

std::vector<double> ScoreTable::scores() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const ScoreRow& r : rows) out.push_back(r.score);
  return out;
}

std::vector<int> ScoreTable::labels() const {
  std::vector<int> out;
  out.reserve(rows.size());
  for (const ScoreRow& r : rows) {
    if (!r.label) throw InvalidParameterError("score table has no labels");
    out.push_back(*r.label);
  }
  return out;
}

void ScoreTable::validate() const {
  std::set<std::string> seen;
  const bool labeled = has_labels();
  for (const ScoreRow& r : rows) {
    if (r.id.empty()) throw FormatError("score table has an empty id");
    if (!seen.insert(r.id).second) throw FormatError("duplicate score id '" + r.id + "'");
    if (!std::isfinite(r.score)) throw FormatError("non-finite score for id '" + r.id + "'");
    if (r.label.has_value() != labeled) {
      throw FormatError("score table mixes labeled and unlabeled rows");
    }
    if (r.label && *r.label != 0 && *r.label != 1) {
      throw FormatError("score label must be 0/1 for id '" + r.id + "'");
    }
  }
}

ScoreTable read_score_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score table: " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw FormatError("empty score table: " + path.string());
  if (!header.empty() && header.back() == '\r') header.pop_back();
  bool labeled = false;
  if (header == "id,score,label") {
    labeled = true;
  } else if (header != "id,score") {
    throw FormatError("score table header must be 'id,score[,label]', got '" + header +
                      "'");
  }
  ScoreTable table;
  table.model_tag = path.stem().string();
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    ScoreRow row;
    std::string field;
    if (!std::getline(ls, row.id, ',')) {
      throw FormatError("bad score row at line " + std::to_string(lineno));
    }
    if (!std::getline(ls, field, ',')) {
      throw FormatError("missing score at line " + std::to_string(lineno));
    }
    try {
      std::size_t pos = 0;
      row.score = std::stod(field, &pos);
      if (pos != field.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw FormatError("bad score value '" + field + "' at line " + std::to_string(lineno));
    }
    if (labeled) {
      if (!std::getline(ls, field, ',')) {
        throw FormatError("missing label at line " + std::to_string(lineno));
      }
      if (field == "0") {
        row.label = 0;
      } else if (field == "1") {
        row.label = 1;
      } else {
        throw FormatError("bad label '" + field + "' at line " + std::to_string(lineno));
      }
    }
    table.rows.push_back(std::move(row));
  }
  table.validate();
  return table;
}

void write_score_table(const std::filesystem::path& path, const ScoreTable& table) {
  table.validate();
  std::ofstream out(path);
  if (!out) throw IoError("cannot write score table: " + path.string());
  const bool labeled = table.has_labels();
  out << (labeled ? "id,score,label\n" : "id,score\n");
  char buf[64];
  for (const ScoreRow& r : table.rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.score);
    out << r.id << ',' << buf;
    if (labeled) out << ',' << *r.label;
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace auscult
