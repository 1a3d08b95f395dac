// auscult/frontend/feature_io.cpp
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

#include "auscult/frontend/feature_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "auscult/error.hpp"

namespace auscult {

void write_features(const std::filesystem::path& path, const TimeFreqRepr& repr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("write_features: cannot open " + path.string());
  out << "F " << repr.data.rows() << "\n";
  out << "T " << repr.data.cols() << "\n";
  out << "source " << (repr.source == FeatureSource::learned ? "learned" : "mel")
      << "\n";
  char buf[64];
  for (int r = 0; r < repr.data.rows(); ++r) {
    for (int c = 0; c < repr.data.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", repr.data(r, c));
      out << buf << (c + 1 < repr.data.cols() ? "," : "\n");
    }
  }
  if (!out) throw IoError("write_features: write failed for " + path.string());
}

TimeFreqRepr read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_features: cannot open " + path.string());

  auto header_value = [&](const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) {
      throw FormatError("read_features: truncated header in " + path.string());
    }
    if (line.rfind(key + " ", 0) != 0) {
      throw FormatError("read_features: expected '" + key + " ...' in " + path.string());
    }
    return line.substr(key.size() + 1);
  };

  int f_count = 0, t_count = 0;
  try {
    f_count = std::stoi(header_value("F"));
    t_count = std::stoi(header_value("T"));
  } catch (const std::exception&) {
    throw FormatError("read_features: bad dimension in " + path.string());
  }
  const std::string source = header_value("source");
  if (f_count < 1 || t_count < 1) {
    throw FormatError("read_features: non-positive shape in " + path.string());
  }

  TimeFreqRepr repr;
  if (source == "learned") {
    repr.source = FeatureSource::learned;
  } else if (source == "mel") {
    repr.source = FeatureSource::mel;
  } else {
    throw FormatError("read_features: unknown source '" + source + "'");
  }
  repr.data = Matrix(f_count, t_count);
  std::string line;
  for (int r = 0; r < f_count; ++r) {
    if (!std::getline(in, line)) {
      throw FormatError("read_features: truncated data in " + path.string());
    }
    std::istringstream row(line);
    std::string cell;
    for (int c = 0; c < t_count; ++c) {
      if (!std::getline(row, cell, ',')) {
        throw FormatError("read_features: short row in " + path.string());
      }
      try {
        repr.data(r, c) = std::stod(cell);
      } catch (const std::exception&) {
        throw FormatError("read_features: bad value '" + cell + "'");
      }
    }
  }
  return repr;
}

}  // namespace auscult
