#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "auscult/error.hpp"
#include "auscult/frontend/cosgauss.hpp"
#include "auscult/frontend/mel.hpp"
#include "auscult/fusion/score_table.hpp"
#include "auscult/models/checkpoint.hpp"
#include "auscult/models/sequence_model.hpp"
#include "auscult/numerics/rng.hpp"
#include "auscult/pipeline/cli.hpp"
#include "auscult/pipeline/experiment.hpp"
#include "auscult/pipeline/manifest.hpp"
#include "auscult/pipeline/synth.hpp"
#include "auscult/pipeline/wav.hpp"
#include "testutil.hpp"

using namespace auscult;

namespace {

// Captures std::cout (and silences std::cerr) for one cli_main call.
int run_cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::vector<const char*> argv;
  argv.push_back("auscult");
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream oss, ess;
  std::streambuf* old_out = std::cout.rdbuf(oss.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(ess.rdbuf());
  int rc = -1;
  try {
    rc = cli_main(static_cast<int>(argv.size()), argv.data());
  } catch (...) {
    std::cout.rdbuf(old_out);
    std::cerr.rdbuf(old_err);
    throw;
  }
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  if (out != nullptr) *out = oss.str();
  return rc;
}

// Rectangular-window DFT power at one frequency.
double dft_power(const std::vector<double>& x, int fs, double freq) {
  const double w = 2.0 * std::numbers::pi * freq / static_cast<double>(fs);
  double re = 0.0, im = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    re += x[n] * std::cos(w * static_cast<double>(n));
    im -= x[n] * std::sin(w * static_cast<double>(n));
  }
  return re * re + im * im;
}

// Frequency of the strongest DFT line in [lo_hz, hi_hz], on a grid matching
// the clip's natural resolution.
double peak_hz_in_band(const std::vector<double>& x, int fs, double lo_hz, double hi_hz) {
  const double step = static_cast<double>(fs) / static_cast<double>(x.size());
  double best_f = lo_hz, best_p = -1.0;
  for (double f = lo_hz; f <= hi_hz; f += step) {
    const double p = dft_power(x, fs, f);
    if (p > best_p) {
      best_p = p;
      best_f = f;
    }
  }
  return best_f;
}

SynthSpec small_shift_spec(std::uint64_t seed) {
  SynthSpec spec;
  spec.n_pos = 8;
  spec.n_neg = 16;
  spec.duration_s = 0.25;
  spec.sample_rate = 8000;
  spec.mode = SynthMode::centroid_shift;
  spec.separation = 1.0;
  spec.n_folds = 3;
  spec.seed = seed;
  return spec;
}

std::string experiment_config_text(const std::string& system, int epochs,
                                   std::uint64_t seed) {
  std::ostringstream cfg;
  cfg << "system = " << system << "\n"
      << "manifest = manifest.csv\n"
      << "mel_bands = 10\n"
      << "frame_len = 256\n"
      << "hop = 128\n"
      << "sample_rate = 8000\n"
      << "epochs = " << epochs << "\n"
      << "batch_size = 8\n"
      << "blstm_hidden = 6\n"
      << "fc_hidden = 6\n"
      << "tdnn_width = 0.125\n"
      << "pca_components = 4\n"
      << "seed = " << seed << "\n";
  return cfg.str();
}

ExperimentConfig small_experiment(const std::filesystem::path& dataset,
                                  const std::filesystem::path& out_dir,
                                  const std::string& system, int epochs,
                                  std::uint64_t seed) {
  testutil::spit(dataset / "exp.cfg", experiment_config_text(system, epochs, seed));
  ExperimentConfig cfg = load_experiment_config(dataset / "exp.cfg");
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("wav: synthesis values survive a save/load round trip") {
  testutil::TempDir tmp("wav_roundtrip");
  Waveform w;
  w.sample_rate = 8000;
  w.samples = {-1.0, 1.0, 0.0, 0.5, -0.25};
  save_wav(tmp / "clip.wav", w);
  const Waveform back = load_wav(tmp / "clip.wav");
  CHECK(back.sample_rate == 8000);
  REQUIRE(back.samples.size() == 5);
  CHECK(back.samples[0] == -1.0);  // -32768 is representable
  CHECK(back.samples[1] == 32767.0 / 32768.0);  // +1.0 clamps to full scale
  CHECK(back.samples[2] == 0.0);
  CHECK(back.samples[3] == 0.5);
  CHECK(back.samples[4] == -0.25);
}

TEST_CASE("wav: quantization is a fixpoint of save(load(save(x)))") {
  testutil::TempDir tmp("wav_fixpoint");
  Rng rng(21);
  Waveform w;
  w.sample_rate = 8000;
  for (int i = 0; i < 400; ++i) w.samples.push_back(rng.uniform(-1.1, 1.1));
  save_wav(tmp / "a.wav", w);
  save_wav(tmp / "b.wav", load_wav(tmp / "a.wav"));
  CHECK(testutil::slurp(tmp / "a.wav") == testutil::slurp(tmp / "b.wav"));
}

TEST_CASE("wav: loader skips unknown chunks and honors odd-length padding") {
  testutil::TempDir tmp("wav_chunks");
  // Canonical 4-sample file, then splice a 3-byte "junk" chunk (plus its pad
  // byte) between fmt and data.
  Waveform w;
  w.sample_rate = 8000;
  w.samples = {0.25, -0.5, 0.75, -0.125};
  save_wav(tmp / "plain.wav", w);
  std::string bytes = testutil::slurp(tmp / "plain.wav");
  REQUIRE(bytes.size() == 44 + 8);
  const std::string junk = std::string("junk") + '\x03' + '\x00' + '\x00' + '\x00' +
                           "abc" + '\x00';
  std::string spliced = bytes.substr(0, 36) + junk + bytes.substr(36);
  // Patch the RIFF size field (bytes 4..7, little endian).
  const std::uint32_t riff = static_cast<std::uint32_t>(spliced.size()) - 8;
  for (int i = 0; i < 4; ++i) {
    spliced[static_cast<std::size_t>(4 + i)] =
        static_cast<char>((riff >> (8 * i)) & 0xffu);
  }
  testutil::spit(tmp / "spliced.wav", spliced);

  const Waveform back = load_wav(tmp / "spliced.wav");
  CHECK(back.sample_rate == 8000);
  REQUIRE(back.samples.size() == 4);
  CHECK(back.samples[0] == 0.25);
  CHECK(back.samples[3] == -0.125);
}

TEST_CASE("wav: rejects name the offending property") {
  testutil::TempDir tmp("wav_rejects");
  Waveform w;
  w.sample_rate = 8000;
  w.samples = {0.1, -0.1, 0.2, -0.2};
  save_wav(tmp / "good.wav", w);
  const std::string bytes = testutil::slurp(tmp / "good.wav");

  // Canonical layout: format@20, channels@22, bits@34 (single 16-byte fmt).
  std::string stereo = bytes;
  stereo[22] = 2;
  testutil::spit(tmp / "stereo.wav", stereo);
  CHECK_THROWS_WITH_AS(load_wav(tmp / "stereo.wav"), doctest::Contains("channels"),
                       FormatError);

  std::string eight = bytes;
  eight[34] = 8;
  testutil::spit(tmp / "eight.wav", eight);
  CHECK_THROWS_WITH_AS(load_wav(tmp / "eight.wav"),
                       doctest::Contains("bits per sample"), FormatError);

  std::string ieee = bytes;
  ieee[20] = 3;
  testutil::spit(tmp / "ieee.wav", ieee);
  CHECK_THROWS_WITH_AS(load_wav(tmp / "ieee.wav"),
                       doctest::Contains("format code"), FormatError);

  testutil::spit(tmp / "truncated.wav", bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_WITH_AS(load_wav(tmp / "truncated.wav"),
                       doctest::Contains("runs past end"), FormatError);

  testutil::spit(tmp / "nonsense.wav", "this is not audio at all............");
  CHECK_THROWS_WITH_AS(load_wav(tmp / "nonsense.wav"),
                       doctest::Contains("not a RIFF/WAVE"), FormatError);

  // fmt only, no data chunk.
  testutil::spit(tmp / "nodata.wav", bytes.substr(0, 36));
  CHECK_THROWS_WITH_AS(load_wav(tmp / "nodata.wav"),
                       doctest::Contains("missing data"), FormatError);

  CHECK_THROWS_AS(load_wav(tmp / "absent.wav"), IoError);
}

TEST_CASE("manifest: write/read round trip preserves every field") {
  testutil::TempDir tmp("manifest_roundtrip");
  std::vector<ManifestEntry> entries;
  const char* modalities[3] = {"breathing", "cough", "speech"};
  for (int i = 0; i < 7; ++i) {
    ManifestEntry e;
    e.id = "clip_" + std::to_string(i);
    e.path = "wav/clip_" + std::to_string(i) + ".wav";
    e.label = i % 2;
    e.modality = modalities[i % 3];
    e.fold = i % 3;
    entries.push_back(e);
  }
  write_manifest(tmp / "manifest.csv", entries);
  const auto back = read_manifest(tmp / "manifest.csv");
  REQUIRE(back.size() == entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CHECK(back[i].id == entries[i].id);
    CHECK(back[i].path == entries[i].path);
    CHECK(back[i].label == entries[i].label);
    CHECK(back[i].modality == entries[i].modality);
    CHECK(back[i].fold == entries[i].fold);
  }
}

TEST_CASE("manifest: CRLF lines parse, malformed rows name their line") {
  testutil::TempDir tmp("manifest_bad");
  const auto path = tmp / "m.csv";

  testutil::spit(path,
                 "id,path,label,modality,fold\r\n"
                 "a,wav/a.wav,1,cough,0\r\n");
  const auto ok = read_manifest(path);
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].modality == "cough");

  testutil::spit(path, "id;path;label\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("first line"), FormatError);

  testutil::spit(path, "id,path,label,modality,fold\na,wav/a.wav,1,cough\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("expected 5 fields"),
                       FormatError);

  testutil::spit(path, "id,path,label,modality,fold\na,wav/a.wav,x,cough,0\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("bad label"), FormatError);

  testutil::spit(path, "id,path,label,modality,fold\na,wav/a.wav,2,cough,0\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("label must be 0 or 1"),
                       FormatError);

  testutil::spit(path, "id,path,label,modality,fold\na,wav/a.wav,1,humming,0\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("unknown modality"),
                       FormatError);

  testutil::spit(path,
                 "id,path,label,modality,fold\n"
                 "a,wav/a.wav,1,cough,0\n"
                 "a,wav/b.wav,0,speech,1\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("line 3"), FormatError);

  testutil::spit(path, "id,path,label,modality,fold\na,wav/a.wav,1,cough,-1\n");
  CHECK_THROWS_WITH_AS(read_manifest(path), doctest::Contains("fold must be >= 0"),
                       FormatError);

  CHECK_THROWS_AS(read_manifest(tmp / "absent.csv"), IoError);
}

TEST_CASE("synth: same seed reproduces the dataset byte for byte") {
  testutil::TempDir tmp("synth_repro");
  SynthSpec spec = small_shift_spec(77);
  spec.duration_s = 0.1;
  const auto a = synth_dataset(spec, tmp / "a");
  const auto b = synth_dataset(spec, tmp / "b");
  REQUIRE(a.size() == b.size());
  CHECK(testutil::slurp(tmp / "a" / "manifest.csv") ==
        testutil::slurp(tmp / "b" / "manifest.csv"));
  for (const ManifestEntry& e : a) {
    CHECK(testutil::slurp(tmp / "a" / e.path) == testutil::slurp(tmp / "b" / e.path));
  }
}

TEST_CASE("synth: default prevalence is 17.2% and folds are balanced within one clip") {
  testutil::TempDir tmp("synth_folds");
  SynthSpec spec;  // default 43/207, 5 folds
  spec.duration_s = 0.05;
  spec.sample_rate = 8000;
  spec.seed = 3;
  const auto entries = synth_dataset(spec, tmp / "d");
  REQUIRE(static_cast<int>(entries.size()) == 250);

  int n_pos = 0;
  for (const auto& e : entries) n_pos += e.label;
  CHECK(n_pos == 43);
  CHECK(std::abs(static_cast<double>(n_pos) / 250.0 - 0.172) < 1e-12);

  const double per_fold_pos = 43.0 / 5.0;
  const double per_fold_neg = 207.0 / 5.0;
  for (int f = 0; f < 5; ++f) {
    int pos = 0, neg = 0;
    for (const auto& e : entries) {
      if (e.fold != f) continue;
      (e.label == 1 ? pos : neg)++;
    }
    CHECK(std::abs(pos - per_fold_pos) <= 1.0);
    CHECK(std::abs(neg - per_fold_neg) <= 1.0);
  }

  // Balance also holds inside each modality: a modality's positives land on
  // the folds as evenly as 5 bins allow.
  for (const char* m : {"breathing", "cough", "speech"}) {
    int mod_pos = 0;
    for (const auto& e : entries) mod_pos += (e.modality == m && e.label == 1) ? 1 : 0;
    for (int f = 0; f < 5; ++f) {
      int pos = 0;
      for (const auto& e : entries) {
        pos += (e.modality == m && e.fold == f && e.label == 1) ? 1 : 0;
      }
      CHECK(std::abs(pos - static_cast<double>(mod_pos) / 5.0) <= 1.0);
    }
  }

  // Modality rotates clip-by-clip, so each one holds a third of the data.
  for (const char* m : {"breathing", "cough", "speech"}) {
    int count = 0;
    for (const auto& e : entries) count += e.modality == m ? 1 : 0;
    CHECK(std::abs(count - 250 / 3) <= 1);
  }
}

TEST_CASE("synth: zero separation makes the classes bitwise identical") {
  SynthSpec spec = small_shift_spec(9);
  spec.separation = 0.0;
  for (int i : {0, 1, 5}) {
    const Waveform neg = synth_clip(spec, i, 0);
    const Waveform pos = synth_clip(spec, i, 1);
    CHECK(testutil::bitwise_equal(neg.samples, pos.samples));
  }

  SynthSpec mspec = spec;
  mspec.mode = SynthMode::mel_mismatch;
  mspec.mel_bands = 12;
  mspec.frame_len = 512;
  for (int i : {0, 3}) {
    const Waveform neg = synth_clip(mspec, i, 0);
    const Waveform pos = synth_clip(mspec, i, 1);
    CHECK(testutil::bitwise_equal(neg.samples, pos.samples));
  }
}

TEST_CASE("synth: mel-mismatch plan geometry") {
  SynthSpec spec;
  spec.mode = SynthMode::mel_mismatch;
  spec.sample_rate = 8000;
  spec.frame_len = 512;
  spec.mel_bands = 12;
  const MelMismatchPlan plan = plan_mel_mismatch(spec);

  CHECK(plan.delta_mel ==
        hz_to_mel(spec.sample_rate / 2.0) / static_cast<double>(spec.mel_bands + 1));
  CHECK(plan.cue_band == 4);  // bands/3, clamped to the interior

  const MelBank bank = make_mel_bank(spec.mel_bands, spec.sample_rate, next_pow2(512));
  CHECK(plan.center_mel == hz_to_mel(bank.center_hz[4]));
  CHECK(plan.masker_lo_hz == bank.center_hz[3]);
  CHECK(plan.masker_hi_hz == bank.center_hz[5]);
  CHECK(plan.masker_lo_hz < mel_to_hz(plan.center_mel));
  CHECK(mel_to_hz(plan.center_mel) < plan.masker_hi_hz);

  SynthSpec few = spec;
  few.mel_bands = 4;
  CHECK(plan_mel_mismatch(few).cue_band == 1);  // clamped off the edges
  few.mel_bands = 3;
  CHECK_THROWS_AS(plan_mel_mismatch(few), InvalidParameterError);
}

TEST_CASE("synth: mel-mismatch cue tone lands on the labeled side of the apex") {
  SynthSpec spec;
  spec.mode = SynthMode::mel_mismatch;
  spec.sample_rate = 8000;
  spec.frame_len = 512;
  spec.mel_bands = 12;
  spec.duration_s = 0.4;
  spec.separation = 1.0;
  spec.seed = 13;
  const MelMismatchPlan plan = plan_mel_mismatch(spec);
  const double apex_hz = mel_to_hz(plan.center_mel);
  const double lo = plan.masker_lo_hz + 30.0;
  const double hi = plan.masker_hi_hz - 30.0;
  REQUIRE(lo < apex_hz);
  REQUIRE(apex_hz < hi);

  for (int i = 0; i < 6; ++i) {
    const Waveform pos = synth_clip(spec, i, 1);
    const Waveform neg = synth_clip(spec, i, 0);
    CHECK(peak_hz_in_band(pos.samples, spec.sample_rate, lo, hi) > apex_hz);
    CHECK(peak_hz_in_band(neg.samples, spec.sample_rate, lo, hi) < apex_hz);
  }
}

TEST_CASE("experiment: rerun with the same config is byte-identical") {
  testutil::TempDir tmp("exp_repro");
  const auto dataset = tmp / "data";
  synth_dataset(small_shift_spec(41), dataset);

  const ExperimentConfig cfg1 = small_experiment(dataset, tmp / "run1", "plain_blstm", 2, 5);
  const ExperimentConfig cfg2 = small_experiment(dataset, tmp / "run2", "plain_blstm", 2, 5);
  const ExperimentResult r1 = run_experiment(cfg1, nullptr);
  const ExperimentResult r2 = run_experiment(cfg2, nullptr);

  CHECK(r1.mean_auc == r2.mean_auc);
  REQUIRE(r1.folds.size() == 3);
  CHECK(testutil::slurp(tmp / "run1" / "summary.csv") ==
        testutil::slurp(tmp / "run2" / "summary.csv"));
  for (int f = 0; f < 3; ++f) {
    const std::string fd = "fold" + std::to_string(f);
    for (const char* name : {"train_log.csv", "val_scores.csv", "checkpoint.bin"}) {
      CHECK(testutil::slurp(tmp / "run1" / fd / name) ==
            testutil::slurp(tmp / "run2" / fd / name));
    }
  }
}

TEST_CASE("experiment: mixup training keeps pace with plain training") {
  testutil::TempDir tmp("exp_mixup");
  const auto dataset = tmp / "data";
  synth_dataset(small_shift_spec(42), dataset);

  ExperimentConfig plain_cfg = small_experiment(dataset, tmp / "plain", "plain_blstm", 8, 5);
  ExperimentConfig mixup_cfg = small_experiment(dataset, tmp / "mixup", "mixup_blstm", 8, 5);
  plain_cfg.lr0 = 0.003;  // 8 epochs at this rate saturate the toy task
  mixup_cfg.lr0 = 0.003;
  const ExperimentResult plain = run_experiment(plain_cfg, nullptr);
  const ExperimentResult mixup = run_experiment(mixup_cfg, nullptr);

  CHECK(plain.mean_auc > 0.7);  // the task is learnable at this size
  CHECK(mixup.mean_auc >= plain.mean_auc - 0.02);
}

TEST_CASE("experiment: embedding head runs without epoch checkpoints") {
  testutil::TempDir tmp("exp_embed");
  const auto dataset = tmp / "data";
  synth_dataset(small_shift_spec(43), dataset);

  const ExperimentResult r = run_experiment(
      small_experiment(dataset, tmp / "run", "embed_head", 1, 5), nullptr);
  REQUIRE(r.folds.size() == 3);
  CHECK(r.mean_auc > 0.6);
  for (const FoldSummary& fs : r.folds) {
    CHECK(std::isnan(fs.best_val_loss));
    const std::string fd = "fold" + std::to_string(fs.fold);
    CHECK_FALSE(std::filesystem::exists(tmp / "run" / fd / "checkpoint.bin"));
    const ScoreTable st = read_score_table(tmp / "run" / fd / "val_scores.csv");
    CHECK(st.has_labels());
    CHECK(static_cast<int>(st.rows.size()) == fs.n_val);
  }

  // summary.csv leaves best_val_loss empty for this head.
  std::istringstream summary(testutil::slurp(tmp / "run" / "summary.csv"));
  std::string line;
  REQUIRE(static_cast<bool>(std::getline(summary, line)));
  CHECK(line == "fold,n_train,n_val,val_auc,best_val_loss");
  while (std::getline(summary, line)) {
    if (line.empty()) continue;
    CHECK(line.back() == ',');
  }
}

TEST_CASE("experiment: a failing fold reports which fold died") {
  testutil::TempDir tmp("exp_foldfail");
  const auto dataset = tmp / "data";
  synth_dataset(small_shift_spec(44), dataset);

  // 0.25 s at 8 kHz frames to T=14 columns, one short of this network's
  // receptive field, so the first forward pass throws inside fold 0.
  const ExperimentConfig cfg = small_experiment(dataset, tmp / "run", "tdnn", 1, 5);
  CHECK_THROWS_WITH_AS(run_experiment(cfg, nullptr), doctest::Contains("fold 0"), Error);
}

TEST_CASE("experiment: sample-rate mismatches are an error, not a resample") {
  testutil::TempDir tmp("exp_rate");
  const auto dataset = tmp / "data";
  synth_dataset(small_shift_spec(45), dataset);

  ExperimentConfig cfg = small_experiment(dataset, tmp / "run", "plain_blstm", 1, 5);
  cfg.sample_rate = 44100;
  CHECK_THROWS_WITH_AS(run_experiment(cfg, nullptr), doctest::Contains("resample"),
                       FormatError);
}

TEST_CASE("experiment: config loading resolves paths and rejects unknown keys") {
  testutil::TempDir tmp("exp_config");
  const auto dir = tmp / "conf";
  std::filesystem::create_directories(dir);

  testutil::spit(dir / "ok.cfg", "system = plain_blstm\nmanifest = data/manifest.csv\n");
  const ExperimentConfig cfg = load_experiment_config(dir / "ok.cfg");
  CHECK(cfg.manifest == dir / "data/manifest.csv");
  CHECK(cfg.system == "plain_blstm");
  CHECK(cfg.mel_bands == 32);      // defaults survive
  CHECK(cfg.frame_len == 1102);
  CHECK(cfg.hop == 441);
  CHECK(cfg.sample_rate == 44100);

  testutil::spit(dir / "typo.cfg",
                 "system = plain_blstm\nmanifest = m.csv\nlearning_rate = 0.1\n");
  CHECK_THROWS_WITH_AS(load_experiment_config(dir / "typo.cfg"),
                       doctest::Contains("learning_rate"), InvalidConfigError);

  testutil::spit(dir / "nosystem.cfg", "manifest = m.csv\n");
  CHECK_THROWS_AS(load_experiment_config(dir / "nosystem.cfg"), InvalidConfigError);

  testutil::spit(dir / "badsystem.cfg", "system = resnet\nmanifest = m.csv\n");
  CHECK_THROWS_WITH_AS(load_experiment_config(dir / "badsystem.cfg"),
                       doctest::Contains("unknown system"), InvalidConfigError);
}

TEST_CASE("cli: synth/train/predict chain agrees with the experiment's own scores") {
  testutil::TempDir tmp("cli_chain");
  const std::string dataset = (tmp / "data").string();

  std::string out;
  REQUIRE(run_cli({"synth", "--out-dir", dataset, "--seed", "41", "--n-pos", "8",
                   "--n-neg", "16", "--folds", "3", "--duration", "0.25",
                   "--sample-rate", "8000"},
                  &out) == 0);
  CHECK(out.find("wrote 24 clips") != std::string::npos);
  REQUIRE(std::filesystem::exists(tmp / "data" / "manifest.csv"));

  testutil::spit(tmp / "data" / "exp.cfg", experiment_config_text("plain_blstm", 2, 5));
  const std::string exp_dir = (tmp / "exp").string();
  REQUIRE(run_cli({"train", "--config", (tmp / "data" / "exp.cfg").string(), "--out-dir",
                   exp_dir},
                  &out) == 0);
  CHECK(out.find("mean fold AUC") != std::string::npos);

  // Pick a fold-0 validation clip and its experiment-reported score string.
  const auto entries = read_manifest(tmp / "data" / "manifest.csv");
  std::string val_id, val_wav;
  for (const auto& e : entries) {
    if (e.fold == 0) {
      val_id = e.id;
      val_wav = (tmp / "data" / e.path).string();
      break;
    }
  }
  REQUIRE_FALSE(val_id.empty());
  std::string expected;
  {
    std::istringstream scores(testutil::slurp(tmp / "exp" / "fold0" / "val_scores.csv"));
    std::string line;
    while (std::getline(scores, line)) {
      if (line.rfind(val_id + ",", 0) == 0) {
        const auto a = line.find(','), b = line.find(',', a + 1);
        expected = line.substr(a + 1, b - a - 1);
        break;
      }
    }
  }
  REQUIRE_FALSE(expected.empty());

  const std::string ckpt = (tmp / "exp" / "fold0" / "checkpoint.bin").string();
  REQUIRE(run_cli({"predict", "--checkpoint", ckpt, "--wav", val_wav, "--frame-len",
                   "256", "--hop", "128"},
                  &out) == 0);
  CHECK(out == expected + "\n");

  // The dumped-features route scores bitwise the same as the WAV route.
  const std::string feat = (tmp / "feat.txt").string();
  REQUIRE(run_cli({"features", "--wav", val_wav, "--out", feat, "--mel-bands", "10",
                   "--frame-len", "256", "--hop", "128"},
                  &out) == 0);
  REQUIRE(run_cli({"predict", "--checkpoint", ckpt, "--features", feat}, &out) == 0);
  CHECK(out == expected + "\n");

  // Fuse this system with the embedding head over the same folds.
  testutil::spit(tmp / "data" / "embed.cfg", experiment_config_text("embed_head", 1, 5));
  const std::string embed_dir = (tmp / "embed").string();
  REQUIRE(run_cli({"train", "--config", (tmp / "data" / "embed.cfg").string(), "--out-dir",
                   embed_dir},
                  &out) == 0);

  const std::string fused_dir = (tmp / "fused").string();
  REQUIRE(run_cli({"fuse", exp_dir, embed_dir, "--gamma", "0.4", "--samples", "60",
                   "--seed", "3", "--out-dir", fused_dir},
                  &out) == 0);
  CHECK(out.find("fused mean fold AUC") != std::string::npos);

  const std::string weights = testutil::slurp(tmp / "fused" / "weights.csv");
  CHECK(weights.rfind("model,weight\n", 0) == 0);
  CHECK(weights.find("exp,") != std::string::npos);
  CHECK(weights.find("embed,") != std::string::npos);

  const std::string report = testutil::slurp(tmp / "fused" / "search_report.csv");
  CHECK(report.rfind("draw,mean_auc,w0,w1\n", 0) == 0);
  CHECK(report.find("# winner") != std::string::npos);

  for (int f = 0; f < 3; ++f) {
    const ScoreTable fused = read_score_table(
        tmp / "fused" / ("fold" + std::to_string(f)) / "fused_scores.csv");
    CHECK(fused.has_labels());
    CHECK(fused.rows.size() >= 2);
  }

  // Same seed, fresh output directory: same weights file.
  const std::string fused2 = (tmp / "fused2").string();
  REQUIRE(run_cli({"fuse", exp_dir, embed_dir, "--gamma", "0.4", "--samples", "60",
                   "--seed", "3", "--out-dir", fused2},
                  &out) == 0);
  CHECK(testutil::slurp(tmp / "fused2" / "weights.csv") == weights);
}

TEST_CASE("cli: eval-auc prints the worked 4-sample example") {
  testutil::TempDir tmp("cli_auc");
  ScoreTable t;
  t.model_tag = "t";
  const double scores[4] = {0.1, 0.4, 0.35, 0.8};
  const int labels[4] = {0, 0, 1, 1};
  for (int i = 0; i < 4; ++i) {
    ScoreRow row;
    row.id = "s" + std::to_string(i);
    row.score = scores[i];
    row.label = labels[i];
    t.rows.push_back(row);
  }
  write_score_table(tmp / "scores.csv", t);

  std::string out;
  CHECK(run_cli({"eval-auc", (tmp / "scores.csv").string()}, &out) == 0);
  CHECK(out == "0.7500\n");
}

TEST_CASE("cli: dump-centers matches the library initializer and checkpoints") {
  testutil::TempDir tmp("cli_centers");
  std::string out;
  REQUIRE(run_cli({"dump-centers", "--out", (tmp / "fresh.csv").string(), "--n-filters",
                   "12", "--sample-rate", "8000"},
                  &out) == 0);

  GaussKernelBank bank;
  bank.mu = init_centers_mel(12, 8000);
  write_centers_csv(tmp / "expected.csv", dump_centers(bank, 8000));
  CHECK(testutil::slurp(tmp / "fresh.csv") == testutil::slurp(tmp / "expected.csv"));

  // A trained checkpoint carries its own bank and sample rate.
  Rng rng(6);
  CosGaussModelConfig mc;
  mc.frame_len = 64;
  mc.kernel_len = 17;
  mc.n_filters = 4;
  mc.context = 3;
  mc.rel_hidden = 3;
  mc.blstm_hidden = 3;
  mc.fc_hidden = 3;
  mc.sample_rate = 8000;
  const auto model = make_cosgauss_model(mc, rng);
  write_checkpoint(tmp / "cg.bin", model->to_checkpoint());
  REQUIRE(run_cli({"dump-centers", "--out", (tmp / "ck.csv").string(), "--checkpoint",
                   (tmp / "cg.bin").string()},
                  &out) == 0);
  const std::string ck_csv = testutil::slurp(tmp / "ck.csv");
  CHECK(ck_csv.rfind("index,hz\n", 0) == 0);
  CHECK(std::count(ck_csv.begin(), ck_csv.end(), '\n') == 5);  // header + 4 centers

  // A checkpoint without a filterbank is rejected (library error -> exit 2).
  Rng rng2(7);
  const auto blstm = make_blstm_model(5, 3, 3, rng2);
  write_checkpoint(tmp / "blstm.bin", blstm->to_checkpoint());
  CHECK(run_cli({"dump-centers", "--out", (tmp / "x.csv").string(), "--checkpoint",
                 (tmp / "blstm.bin").string()},
                &out) == 2);
}

TEST_CASE("cli: exit codes separate usage errors from data errors") {
  testutil::TempDir tmp("cli_codes");
  std::string out;
  CHECK(run_cli({"--help"}, &out) == 0);
  CHECK(out.find("synth") != std::string::npos);

  CHECK(run_cli({"no-such-command"}, &out) == 1);
  CHECK(run_cli({"synth"}, &out) == 1);  // missing required --out-dir
  CHECK(run_cli({"predict", "--checkpoint", "x.bin"}, &out) == 1);  // no input source
  CHECK(run_cli({"fuse", "only-one-dir", "--out-dir", (tmp / "f").string()}, &out) == 1);

  CHECK(run_cli({"eval-auc", (tmp / "absent.csv").string()}, &out) == 2);

  testutil::spit(tmp / "bad.cfg", "system = plain_blstm\nmanifest = m.csv\noops = 1\n");
  CHECK(run_cli({"train", "--config", (tmp / "bad.cfg").string(), "--out-dir",
                 (tmp / "o").string()},
                &out) == 2);
}
