// auscult/frontend/framing.cpp
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

#include "auscult/frontend/framing.hpp"

#include "auscult/error.hpp"

namespace auscult {

int frame_count(std::size_t num_samples, int frame_len, int hop) {
  if (frame_len < 1 || hop < 1) {
    throw InvalidParameterError("frame_count: frame_len and hop must be >= 1");
  }
  if (num_samples < static_cast<std::size_t>(frame_len)) {
    throw InputTooShortError("frame_count: signal shorter than one frame");
  }
  return static_cast<int>((num_samples - frame_len) / hop) + 1;
}

Matrix frame_signal(const Waveform& w, int frame_len, int hop) {
  const int t_count = frame_count(w.samples.size(), frame_len, hop);
  Matrix frames(frame_len, t_count);
  for (int t = 0; t < t_count; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * hop;
    for (int s = 0; s < frame_len; ++s) {
      frames(s, t) = w.samples[base + s];
    }
  }
  return frames;
}

}  // namespace auscult
