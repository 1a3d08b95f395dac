// auscult/pipeline/synth.hpp
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
// Synthetic two-class audio generator: a desk-scale stand-in for clinical
// recordings that are not redistributable.  Every clip is a deterministic
// function of (spec.seed, clip index), so a dataset can be regenerated
// bit for bit.

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "auscult/frontend/framing.hpp"
#include "auscult/pipeline/manifest.hpp"

namespace auscult {

// centroid_shift: both classes are band-limited noise plus a low-frequency
//   AM harmonic stack; the positive class shifts its noise centroid up and
//   the negative class down by `separation` times a fixed offset.  Easy for
//   any spectral front end; this is the separability workload.
//
// mel_mismatch: one narrowband cue tone per clip, placed symmetrically in
//   MEL coordinates around a triangle apex (positives above, negatives
//   below), with matched random-amplitude masker tones parked on the two
//   neighboring apexes.  A triangular mel bank with these exact band edges
//   captures identical expected energy per band for both classes, so the
//   classes are (near) indistinguishable through it, while any front end
//   that can center a passband between the apexes separates them.  This is
//   the filter-placement workload.
enum class SynthMode { centroid_shift, mel_mismatch };

struct SynthSpec {
  int n_pos = 43;    // 43 / 250 mirrors the 17.2% positive prevalence
  int n_neg = 207;
  double duration_s = 0.53;
  int sample_rate = 44100;
  SynthMode mode = SynthMode::centroid_shift;
  double separation = 1.0;   // class-separation dial; 0 makes the classes
                             // identically distributed in both modes
  double noise_level = 0.05; // white-noise amplitude before peak scaling
  int mel_bands = 32;        // band layout the mel_mismatch cue is planned on
  int frame_len = kDefaultFrameLen;  // analysis frame the planning assumes
  int n_folds = 5;
  std::uint64_t seed = 1;
};

// Where the mel_mismatch cue lands, in the units the generator plans with.
// Exposed so tests can verify the blindness construction independently.
struct MelMismatchPlan {
  int cue_band = 0;         // apex band index b
  double center_mel = 0.0;  // mel position of apex b
  double delta_mel = 0.0;   // equal mel spacing between adjacent apexes
  double masker_lo_hz = 0.0;  // apex b-1
  double masker_hi_hz = 0.0;  // apex b+1
};

MelMismatchPlan plan_mel_mismatch(const SynthSpec& spec);

// One clip's waveform; label only matters through the class-separating
// parameters, and the per-clip random stream is Rng(spec.seed).child(index).
Waveform synth_clip(const SynthSpec& spec, int clip_index, int label);

// Writes WAVs under out_dir/wav/ and a stratified manifest to
// out_dir/manifest.csv, and returns the manifest entries (paths relative to
// out_dir).  Folds are assigned by label within modality so each fold's
// positive fraction stays within one sample of n_pos/(n_pos+n_neg).
std::vector<ManifestEntry> synth_dataset(const SynthSpec& spec,
                                         const std::filesystem::path& out_dir);

}  // namespace auscult
