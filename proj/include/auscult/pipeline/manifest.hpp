// auscult/pipeline/manifest.hpp
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
// Dataset manifest: one row per clip with its label, sound modality, and
// cross-validation fold.  The fold column makes every split decision a file
// on disk instead of runtime state.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace auscult {

struct ManifestEntry {
  std::string id;        // unique, non-empty
  std::string path;      // WAV location, relative paths resolve against the manifest
  int label = 0;         // 1 positive, 0 negative
  std::string modality;  // breathing | cough | speech
  int fold = 0;          // cross-validation fold index, >= 0
};

// Reads a manifest CSV with required header `id,path,label,modality,fold`.
// Throws FormatError (with line numbers) on malformed rows, duplicate ids,
// labels outside {0,1}, or unknown modalities; IoError when the file cannot
// be opened.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);

// Writes the same CSV format, LF line endings.
void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries);

// True for the modalities the pipeline knows how to interpret.
bool is_known_modality(const std::string& modality);

}  // namespace auscult
