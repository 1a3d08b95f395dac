// auscult/frontend/feature_io.hpp
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

#include "auscult/frontend/mel.hpp"

namespace auscult {

// Feature dump: a 3-line text header
//   F <rows>
//   T <cols>
//   source <learned|mel>
// followed by F CSV rows of T values printed with %.17g, so a write/read
// round trip is bit-exact.
void write_features(const std::filesystem::path& path, const TimeFreqRepr& repr);

TimeFreqRepr read_features(const std::filesystem::path& path);

}  // namespace auscult
