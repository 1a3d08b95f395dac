// auscult/pipeline/synth.cpp
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

#include "auscult/pipeline/synth.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "auscult/error.hpp"
#include "auscult/frontend/mel.hpp"
#include "auscult/numerics/rng.hpp"
#include "auscult/pipeline/wav.hpp"

namespace auscult {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPeakTarget = 0.65;

// centroid_shift family.
constexpr double kShiftBaseHz = 1500.0;
constexpr double kShiftDeltaHz = 600.0;
constexpr double kShiftBandHalfHz = 250.0;
constexpr int kShiftNoiseTones = 16;

// mel_mismatch family.  The cue sits at apex +/- (frac + jitter*u) mel
// spacings; both margins below keep the analysis window's spectral main
// lobe on a single linear segment of every triangle.
constexpr double kCueFrac = 0.34;
constexpr double kCueJitterFrac = 0.13;
constexpr double kCueAmp = 0.20;
constexpr double kMaskerAmp = 0.35;

const char* kModalities[3] = {"breathing", "cough", "speech"};

void validate_spec(const SynthSpec& spec) {
  if (spec.n_folds < 2) {
    throw InvalidParameterError("synth: n_folds must be >= 2, got " +
                                std::to_string(spec.n_folds));
  }
  if (spec.n_pos < spec.n_folds || spec.n_neg < spec.n_folds) {
    throw InvalidParameterError(
        "synth: need at least one clip per class per fold (n_pos " +
        std::to_string(spec.n_pos) + ", n_neg " + std::to_string(spec.n_neg) + ", folds " +
        std::to_string(spec.n_folds) + ")");
  }
  if (spec.sample_rate <= 0) throw InvalidParameterError("synth: sample_rate must be positive");
  if (!(spec.duration_s > 0.0)) throw InvalidParameterError("synth: duration must be positive");
  if (spec.separation < 0.0) throw InvalidParameterError("synth: separation must be >= 0");
  if (spec.noise_level < 0.0) throw InvalidParameterError("synth: noise_level must be >= 0");
  if (spec.mode == SynthMode::mel_mismatch && spec.mel_bands < 4) {
    throw InvalidParameterError("synth: mel_mismatch needs at least 4 mel bands");
  }
}

void add_tone(std::vector<double>& x, int fs, double freq, double amp, double phase) {
  const double w = kTwoPi * freq / static_cast<double>(fs);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] += amp * std::sin(w * static_cast<double>(i) + phase);
  }
}

void add_am_tone(std::vector<double>& x, int fs, double freq, double amp, double phase,
                 double am_rate, double am_depth, double am_phase) {
  const double w = kTwoPi * freq / static_cast<double>(fs);
  const double wm = kTwoPi * am_rate / static_cast<double>(fs);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double env =
        1.0 - 0.5 * am_depth + 0.5 * am_depth * std::sin(wm * static_cast<double>(i) + am_phase);
    x[i] += env * amp * std::sin(w * static_cast<double>(i) + phase);
  }
}

void finish_clip(std::vector<double>& x, double noise_level, Rng& rng) {
  for (double& v : x) v += noise_level * rng.normal();
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  if (peak > 1e-12) {
    const double g = kPeakTarget / peak;
    for (double& v : x) v *= g;
  }
}

// Both synths draw a fixed, label-independent sequence of random values, so
// with separation 0 the two classes are identically distributed (the label
// only enters through deterministic frequency formulas that collapse).
void synth_centroid_shift(const SynthSpec& spec, int label, Rng& rng, std::vector<double>& x) {
  const double centroid =
      kShiftBaseHz + (label == 1 ? 1.0 : -1.0) * spec.separation * kShiftDeltaHz;
  for (int k = 0; k < kShiftNoiseTones; ++k) {
    const double freq = rng.uniform(centroid - kShiftBandHalfHz, centroid + kShiftBandHalfHz);
    const double amp = rng.uniform(0.4, 1.0) * (1.2 / kShiftNoiseTones);
    const double phase = rng.uniform(0.0, kTwoPi);
    add_tone(x, spec.sample_rate, freq, amp, phase);
  }
  const double f0 = rng.uniform(170.0, 230.0);
  const double am_rate = rng.uniform(2.0, 6.0);
  const double am_phase = rng.uniform(0.0, kTwoPi);
  for (int h = 1; h <= 3; ++h) {
    const double phase = rng.uniform(0.0, kTwoPi);
    add_am_tone(x, spec.sample_rate, f0 * h, 0.3 / h, phase, am_rate, 0.5, am_phase);
  }
  finish_clip(x, spec.noise_level, rng);
}

void synth_mel_mismatch(const SynthSpec& spec, int label, const MelMismatchPlan& plan, Rng& rng,
                        std::vector<double>& x) {
  const double u = rng.uniform(-1.0, 1.0);
  const double off_mel = spec.separation * (kCueFrac + kCueJitterFrac * u) * plan.delta_mel;
  const double f_cue = mel_to_hz(plan.center_mel + (label == 1 ? off_mel : -off_mel));
  const double cue_amp = kCueAmp * rng.uniform(0.85, 1.15);
  add_tone(x, spec.sample_rate, f_cue, cue_amp, rng.uniform(0.0, kTwoPi));

  // Maskers on the neighboring apexes bury the cue's spill into those bands.
  const double m_lo = kMaskerAmp * rng.uniform(0.5, 1.5);
  add_tone(x, spec.sample_rate, plan.masker_lo_hz, m_lo, rng.uniform(0.0, kTwoPi));
  const double m_hi = kMaskerAmp * rng.uniform(0.5, 1.5);
  add_tone(x, spec.sample_rate, plan.masker_hi_hz, m_hi, rng.uniform(0.0, kTwoPi));

  const double f0 = rng.uniform(90.0, 110.0);
  const double am_rate = rng.uniform(2.0, 5.0);
  const double am_phase = rng.uniform(0.0, kTwoPi);
  for (int h = 1; h <= 2; ++h) {
    const double phase = rng.uniform(0.0, kTwoPi);
    add_am_tone(x, spec.sample_rate, f0 * h, 0.15 / h, phase, am_rate, 0.5, am_phase);
  }
  finish_clip(x, spec.noise_level, rng);
}

}  // namespace

MelMismatchPlan plan_mel_mismatch(const SynthSpec& spec) {
  validate_spec(spec);
  const int fft_size = next_pow2(spec.frame_len);
  const MelBank bank = make_mel_bank(spec.mel_bands, spec.sample_rate, fft_size);

  MelMismatchPlan plan;
  plan.delta_mel = hz_to_mel(spec.sample_rate / 2.0) / static_cast<double>(spec.mel_bands + 1);
  // An interior apex in the lower third of the axis, away from both the DC
  // edge and the sparse high bands.
  plan.cue_band = std::min(std::max(spec.mel_bands / 3, 1), spec.mel_bands - 2);
  plan.center_mel = hz_to_mel(bank.center_hz[plan.cue_band]);
  plan.masker_lo_hz = bank.center_hz[plan.cue_band - 1];
  plan.masker_hi_hz = bank.center_hz[plan.cue_band + 1];
  return plan;
}

Waveform synth_clip(const SynthSpec& spec, int clip_index, int label) {
  validate_spec(spec);
  if (label != 0 && label != 1) {
    throw InvalidParameterError("synth_clip: label must be 0 or 1");
  }
  const auto n = static_cast<std::size_t>(
      std::llround(spec.duration_s * static_cast<double>(spec.sample_rate)));

  Waveform w;
  w.sample_rate = spec.sample_rate;
  w.samples.assign(n, 0.0);

  Rng clip_rng = Rng(spec.seed).child(static_cast<std::uint64_t>(clip_index));
  if (spec.mode == SynthMode::centroid_shift) {
    synth_centroid_shift(spec, label, clip_rng, w.samples);
  } else {
    const MelMismatchPlan plan = plan_mel_mismatch(spec);
    synth_mel_mismatch(spec, label, plan, clip_rng, w.samples);
  }
  return w;
}

std::vector<ManifestEntry> synth_dataset(const SynthSpec& spec,
                                         const std::filesystem::path& out_dir) {
  validate_spec(spec);
  const int n = spec.n_pos + spec.n_neg;

  std::error_code ec;
  std::filesystem::create_directories(out_dir / "wav", ec);
  if (ec) {
    throw IoError("cannot create output directory " + (out_dir / "wav").string() + ": " +
                  ec.message());
  }

  // Fold assignment walks each label's clips grouped by modality with one
  // continuing counter, so the per-fold count of that label is balanced to
  // within one clip both globally and inside every modality.
  std::vector<int> fold(n, 0);
  std::array<int, 2> counter{0, 0};
  for (int m = 0; m < 3; ++m) {
    for (int i = 0; i < n; ++i) {
      if (i % 3 != m) continue;
      const int label = i < spec.n_pos ? 1 : 0;
      fold[i] = counter[label]++ % spec.n_folds;
    }
  }

  int width = 1;
  for (int v = n - 1; v >= 10; v /= 10) ++width;

  std::vector<ManifestEntry> entries;
  entries.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int label = i < spec.n_pos ? 1 : 0;
    std::string num = std::to_string(i);
    num.insert(0, static_cast<std::size_t>(width) - num.size(), '0');

    ManifestEntry e;
    e.id = "clip_" + num;
    e.path = "wav/clip_" + num + ".wav";
    e.label = label;
    e.modality = kModalities[i % 3];
    e.fold = fold[i];

    save_wav(out_dir / e.path, synth_clip(spec, i, label));
    entries.push_back(std::move(e));
  }

  write_manifest(out_dir / "manifest.csv", entries);
  return entries;
}

}  // namespace auscult
