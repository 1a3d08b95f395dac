// auscult/trainer/config.hpp
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
// Flat key=value config files.  '#' starts a comment, blank lines are
// skipped, duplicate keys are rejected.  Consumers read typed values and then
// call reject_unknown(), which fails on any key nobody asked for - typos in
// config files surface as errors instead of silently doing nothing.

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>

namespace auscult {

class KeyValueConfig {
 public:
  static KeyValueConfig from_file(const std::filesystem::path& path);
  static KeyValueConfig from_string(const std::string& text);

  bool has(const std::string& key) const { return kv_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  int get_int(const std::string& key, int fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;  // true/false/1/0
  unsigned long long get_u64(const std::string& key, unsigned long long fallback) const;

  // Throws InvalidConfigError naming every key that was never read.
  void reject_unknown() const;

 private:
  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> consumed_;
};

}  // namespace auscult
