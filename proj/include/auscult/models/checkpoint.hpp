// auscult/models/checkpoint.hpp
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
// Single-file model container: a versioned text header (architecture tag,
// integer metadata, tensor shapes in declaration order) followed by the raw
// little-endian float64 payload, tensors back to back.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "auscult/numerics/matrix.hpp"

namespace auscult {

inline constexpr const char* kCheckpointMagic = "auscult-checkpoint v1";

struct NamedTensor {
  std::string name;
  Matrix value;
};

struct Checkpoint {
  std::string tag;  // architecture identifier, e.g. "blstm"
  std::vector<std::pair<std::string, long long>> meta;
  std::vector<NamedTensor> tensors;

  long long meta_value(const std::string& key) const;      // FormatError if absent
  const Matrix& tensor(const std::string& name) const;     // FormatError if absent
  void add_meta(const std::string& key, long long value);
  void add_tensor(const std::string& name, const Matrix& value);
};

// Round trip is bitwise: every double read back compares equal (bit pattern
// included) to the one written.
void write_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace auscult
