// auscult/models/checkpoint.cpp
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

#include "auscult/models/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "auscult/error.hpp"

// The payload is raw native doubles; the format is defined as little-endian.
static_assert(std::endian::native == std::endian::little,
              "checkpoint payload assumes a little-endian host");

namespace auscult {

long long Checkpoint::meta_value(const std::string& key) const {
  for (const auto& [k, v] : meta) {
    if (k == key) return v;
  }
  throw FormatError("checkpoint lacks meta key '" + key + "'");
}

const Matrix& Checkpoint::tensor(const std::string& name) const {
  for (const NamedTensor& t : tensors) {
    if (t.name == name) return t.value;
  }
  throw FormatError("checkpoint lacks tensor '" + name + "'");
}

void Checkpoint::add_meta(const std::string& key, long long value) {
  meta.emplace_back(key, value);
}

void Checkpoint::add_tensor(const std::string& name, const Matrix& value) {
  tensors.push_back({name, value});
}

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt) {
  if (ckpt.tag.empty() || ckpt.tag.find_first_of(" \n\t") != std::string::npos) {
    throw InvalidParameterError("checkpoint tag must be a non-empty single token");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open checkpoint for writing: " + path.string());
  out << kCheckpointMagic << '\n';
  out << "tag " << ckpt.tag << '\n';
  out << "meta " << ckpt.meta.size() << '\n';
  for (const auto& [k, v] : ckpt.meta) out << k << ' ' << v << '\n';
  out << "tensors " << ckpt.tensors.size() << '\n';
  for (const NamedTensor& t : ckpt.tensors) {
    out << t.name << ' ' << t.value.rows() << ' ' << t.value.cols() << '\n';
  }
  out << "payload\n";
  for (const NamedTensor& t : ckpt.tensors) {
    out.write(reinterpret_cast<const char*>(t.value.data()),
              static_cast<std::streamsize>(t.value.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

std::string read_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(std::string("checkpoint truncated before ") + what);
  }
  return line;
}

}  // namespace

Checkpoint read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());
  if (read_line(in, "magic") != kCheckpointMagic) {
    throw FormatError("not an auscult checkpoint: " + path.string());
  }
  Checkpoint ckpt;
  {
    std::istringstream ls(read_line(in, "tag"));
    std::string kw;
    if (!(ls >> kw >> ckpt.tag) || kw != "tag") throw FormatError("bad tag line");
  }
  std::size_t meta_count = 0;
  {
    std::istringstream ls(read_line(in, "meta count"));
    std::string kw;
    if (!(ls >> kw >> meta_count) || kw != "meta") throw FormatError("bad meta line");
  }
  for (std::size_t i = 0; i < meta_count; ++i) {
    std::istringstream ls(read_line(in, "meta entry"));
    std::string key;
    long long value = 0;
    if (!(ls >> key >> value)) throw FormatError("bad meta entry");
    ckpt.meta.emplace_back(key, value);
  }
  std::size_t tensor_count = 0;
  {
    std::istringstream ls(read_line(in, "tensor count"));
    std::string kw;
    if (!(ls >> kw >> tensor_count) || kw != "tensors") {
      throw FormatError("bad tensors line");
    }
  }
  std::vector<std::pair<std::string, std::pair<int, int>>> shapes;
  for (std::size_t i = 0; i < tensor_count; ++i) {
    std::istringstream ls(read_line(in, "tensor shape"));
    std::string name;
    int rows = 0, cols = 0;
    if (!(ls >> name >> rows >> cols) || rows < 0 || cols < 0) {
      throw FormatError("bad tensor shape entry");
    }
    shapes.emplace_back(name, std::make_pair(rows, cols));
  }
  if (read_line(in, "payload marker") != "payload") {
    throw FormatError("missing payload marker");
  }
  for (const auto& [name, shape] : shapes) {
    Matrix m(shape.first, shape.second);
    in.read(reinterpret_cast<char*>(m.data()),
            static_cast<std::streamsize>(m.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(m.size() * sizeof(double))) {
      throw FormatError("checkpoint payload truncated at tensor '" + name + "'");
    }
    ckpt.tensors.push_back({name, std::move(m)});
  }
  return ckpt;
}

}  // namespace auscult
