// auscult/pipeline/wav.hpp
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
// Minimal RIFF/WAVE codec for the one shape the pipeline uses: mono 16-bit
// PCM.  Anything else is rejected loudly rather than resampled or remixed.

#pragma once

#include <filesystem>

#include "auscult/frontend/framing.hpp"

namespace auscult {

// Reads a mono 16-bit PCM WAV file.  Samples are scaled by 1/32768, so the
// int16 range maps onto [-1.0, +0.999969...].  Unknown RIFF chunks are
// skipped.  Throws FormatError naming the offending field for any other
// encoding (stereo, 8/24/32-bit, float, compressed), IoError when the file
// cannot be read.
Waveform load_wav(const std::filesystem::path& path);

// Writes a mono 16-bit PCM WAV file.  Each sample is round(x * 32768)
// clamped to [-32768, 32767], the inverse of the load scaling.
void save_wav(const std::filesystem::path& path, const Waveform& w);

}  // namespace auscult
