// auscult/frontend/framing.hpp
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

#include <vector>

#include "auscult/numerics/matrix.hpp"

namespace auscult {

struct Waveform {
  std::vector<double> samples;  // mono, in [-1, 1)
  int sample_rate = 44100;
};

// Paper-parity framing at 44.1 kHz: 1102-sample windows, 441-sample hop.
inline constexpr int kDefaultFrameLen = 1102;
inline constexpr int kDefaultHop = 441;
inline constexpr int kDefaultSampleRate = 44100;

// Number of full frames: floor((len - frame_len) / hop) + 1, no padding.
int frame_count(std::size_t num_samples, int frame_len, int hop);

// Slice into overlapping frames.  Output is frame_len x T; column t holds
// samples [t*hop, t*hop + frame_len).  Throws InputTooShortError when the
// signal cannot fill one frame.
Matrix frame_signal(const Waveform& w, int frame_len, int hop);

}  // namespace auscult
