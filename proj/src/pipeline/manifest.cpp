// auscult/pipeline/manifest.cpp
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

#include "auscult/pipeline/manifest.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "auscult/error.hpp"

namespace auscult {
namespace {

constexpr const char* kHeader = "id,path,label,modality,fold";

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

int parse_int_field(const std::string& token, const std::string& what, int line_no) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    throw FormatError("manifest line " + std::to_string(line_no) + ": bad " + what + " '" +
                      token + "'");
  }
  if (used != token.size()) {
    throw FormatError("manifest line " + std::to_string(line_no) + ": bad " + what + " '" +
                      token + "'");
  }
  return value;
}

}  // namespace

bool is_known_modality(const std::string& modality) {
  return modality == "breathing" || modality == "cough" || modality == "speech";
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());

  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kHeader) {
    throw FormatError("manifest " + path.string() + ": first line must be '" +
                      std::string(kHeader) + "'");
  }

  std::vector<ManifestEntry> entries;
  std::unordered_set<std::string> seen;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) fields.push_back(tok);
    if (!line.empty() && line.back() == ',') fields.push_back("");
    if (fields.size() != 5) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": expected 5 fields, got " +
                        std::to_string(fields.size()));
    }

    ManifestEntry e;
    e.id = fields[0];
    e.path = fields[1];
    e.label = parse_int_field(fields[2], "label", line_no);
    e.modality = fields[3];
    e.fold = parse_int_field(fields[4], "fold", line_no);

    if (e.id.empty()) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": empty id");
    }
    if (!seen.insert(e.id).second) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": duplicate id '" + e.id +
                        "'");
    }
    if (e.path.empty()) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": empty path");
    }
    if (e.label != 0 && e.label != 1) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": label must be 0 or 1");
    }
    if (!is_known_modality(e.modality)) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": unknown modality '" +
                        e.modality + "' (expected breathing, cough, or speech)");
    }
    if (e.fold < 0) {
      throw FormatError("manifest line " + std::to_string(line_no) + ": fold must be >= 0");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open manifest for writing: " + path.string());
  out << kHeader << "\n";
  for (const ManifestEntry& e : entries) {
    out << e.id << ',' << e.path << ',' << e.label << ',' << e.modality << ',' << e.fold << "\n";
  }
  if (!out) throw IoError("write failure on manifest: " + path.string());
}

}  // namespace auscult
