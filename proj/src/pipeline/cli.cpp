// auscult/pipeline/cli.cpp
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

#include "auscult/pipeline/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "auscult/error.hpp"
#include "auscult/frontend/cosgauss.hpp"
#include "auscult/frontend/feature_io.hpp"
#include "auscult/frontend/framing.hpp"
#include "auscult/frontend/mel.hpp"
#include "auscult/fusion/auc.hpp"
#include "auscult/fusion/fuse.hpp"
#include "auscult/fusion/score_table.hpp"
#include "auscult/models/checkpoint.hpp"
#include "auscult/models/sequence_model.hpp"
#include "auscult/pipeline/experiment.hpp"
#include "auscult/pipeline/synth.hpp"
#include "auscult/pipeline/wav.hpp"
#include "auscult/trainer/loop.hpp"

namespace auscult {
namespace {

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void add_synth(CLI::App& app) {
  auto* sc = app.add_subcommand("synth", "Generate a synthetic two-class dataset");
  auto spec = std::make_shared<SynthSpec>();
  auto mode = std::make_shared<std::string>("centroid_shift");
  auto out_dir = std::make_shared<std::string>();

  sc->add_option("--out-dir", *out_dir, "Directory for wav/ and manifest.csv")->required();
  sc->add_option("--seed", spec->seed, "Dataset seed");
  sc->add_option("--mode", *mode, "centroid_shift | mel_mismatch")
      ->check(CLI::IsMember({"centroid_shift", "mel_mismatch"}));
  sc->add_option("--n-pos", spec->n_pos, "Positive clips");
  sc->add_option("--n-neg", spec->n_neg, "Negative clips");
  sc->add_option("--duration", spec->duration_s, "Clip length in seconds");
  sc->add_option("--sample-rate", spec->sample_rate, "Sample rate in Hz");
  sc->add_option("--separation", spec->separation, "Class separation dial; 0 = identical");
  sc->add_option("--noise-level", spec->noise_level, "White noise amplitude");
  sc->add_option("--mel-bands", spec->mel_bands, "Band layout for mel_mismatch planning");
  sc->add_option("--frame-len", spec->frame_len, "Analysis frame the planning assumes");
  sc->add_option("--folds", spec->n_folds, "Cross-validation folds");

  sc->callback([spec, mode, out_dir] {
    spec->mode =
        *mode == "centroid_shift" ? SynthMode::centroid_shift : SynthMode::mel_mismatch;
    const auto entries = synth_dataset(*spec, *out_dir);
    std::cout << "wrote " << entries.size() << " clips and manifest.csv under " << *out_dir
              << "\n";
  });
}

void add_features(CLI::App& app) {
  auto* sc = app.add_subcommand("features", "Dump log-mel features for one WAV");
  auto wav = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto mel_bands = std::make_shared<int>(32);
  auto frame_len = std::make_shared<int>(kDefaultFrameLen);
  auto hop = std::make_shared<int>(kDefaultHop);

  sc->add_option("--wav", *wav, "Input WAV (mono 16-bit PCM)")->required();
  sc->add_option("--out", *out, "Output feature file")->required();
  sc->add_option("--mel-bands", *mel_bands, "Mel bands");
  sc->add_option("--frame-len", *frame_len, "Frame length in samples");
  sc->add_option("--hop", *hop, "Hop in samples");

  sc->callback([wav, out, mel_bands, frame_len, hop] {
    const Waveform w = load_wav(*wav);
    const TimeFreqRepr repr = mel_frontend(w, *mel_bands, *frame_len, *hop);
    write_features(*out, repr);
    std::cout << "wrote " << repr.data.rows() << " x " << repr.data.cols() << " features to "
              << *out << "\n";
  });
}

void add_train(CLI::App& app) {
  auto* sc = app.add_subcommand("train", "Run a cross-validated training experiment");
  auto config = std::make_shared<std::string>();
  auto out_dir = std::make_shared<std::string>();
  auto seed = std::make_shared<unsigned long long>(0);

  sc->add_option("--config", *config, "key=value experiment config")->required();
  sc->add_option("--out-dir", *out_dir, "Directory for fold artifacts")->required();
  auto* seed_opt = sc->add_option("--seed", *seed, "Override the config seed");

  sc->callback([config, out_dir, seed, seed_opt] {
    ExperimentConfig cfg = load_experiment_config(*config);
    cfg.out_dir = *out_dir;
    if (seed_opt->count() > 0) cfg.seed = *seed;
    run_experiment(cfg, &std::cout);
  });
}

void add_predict(CLI::App& app) {
  auto* sc = app.add_subcommand("predict", "Score one clip with a trained checkpoint");
  auto ckpt_path = std::make_shared<std::string>();
  auto wav = std::make_shared<std::string>();
  auto features = std::make_shared<std::string>();
  auto tau = std::make_shared<double>(1.0);
  auto frame_len = std::make_shared<int>(kDefaultFrameLen);
  auto hop = std::make_shared<int>(kDefaultHop);

  sc->add_option("--checkpoint", *ckpt_path, "Model checkpoint")->required();
  auto* wav_opt = sc->add_option("--wav", *wav, "Input WAV");
  auto* feat_opt = sc->add_option("--features", *features, "Precomputed feature file");
  wav_opt->excludes(feat_opt);
  sc->add_option("--tau", *tau, "Softmax temperature");
  sc->add_option("--frame-len", *frame_len, "Frame length for --wav inputs");
  sc->add_option("--hop", *hop, "Hop for --wav inputs");

  sc->callback([ckpt_path, wav, features, tau, frame_len, hop, wav_opt, feat_opt] {
    if (wav_opt->count() == 0 && feat_opt->count() == 0) {
      throw CLI::RequiredError("predict needs --wav or --features");
    }
    const Checkpoint ckpt = read_checkpoint(*ckpt_path);
    std::unique_ptr<SequenceModel> model = model_from_checkpoint(ckpt);

    Matrix x;
    if (model->input_kind() == InputKind::frames) {
      if (wav->empty()) {
        throw InvalidParameterError("checkpoint '" + ckpt.tag +
                                    "' consumes raw framed audio; pass --wav");
      }
      // The filterbank's frame length is part of the model, not a flag.
      x = frame_signal(load_wav(*wav), model->input_rows(), *hop);
    } else if (!features->empty()) {
      x = read_features(*features).data;
    } else {
      x = mel_frontend(load_wav(*wav), model->input_rows(), *frame_len, *hop).data;
    }
    if (x.rows() != model->input_rows()) {
      throw InvalidParameterError("input has " + std::to_string(x.rows()) +
                                  " rows but the checkpoint expects " +
                                  std::to_string(model->input_rows()));
    }
    std::cout << format_g17(predict_positive(*model, x, *tau)) << "\n";
  });
}

// fold<k> subdirectories holding val_scores.csv, sorted by k.
std::vector<std::pair<int, std::filesystem::path>> list_fold_dirs(
    const std::filesystem::path& exp_dir) {
  if (!std::filesystem::is_directory(exp_dir)) {
    throw IoError("not a directory: " + exp_dir.string());
  }
  std::vector<std::pair<int, std::filesystem::path>> folds;
  for (const auto& entry : std::filesystem::directory_iterator(exp_dir)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("fold", 0) != 0 || name.size() == 4) continue;
    const std::string digits = name.substr(4);
    if (digits.find_first_not_of("0123456789") != std::string::npos) continue;
    folds.emplace_back(std::stoi(digits), entry.path());
  }
  if (folds.empty()) {
    throw InvalidParameterError("no fold<k> subdirectories under " + exp_dir.string());
  }
  std::sort(folds.begin(), folds.end());
  return folds;
}

std::string dir_tag(const std::filesystem::path& p) {
  std::filesystem::path n = p.lexically_normal();
  if (n.filename().empty()) n = n.parent_path();
  return n.filename().string();
}

void add_fuse(CLI::App& app) {
  auto* sc = app.add_subcommand(
      "fuse", "Search simplex fusion weights over per-fold validation scores");
  auto dirs = std::make_shared<std::vector<std::string>>();
  auto gamma = std::make_shared<double>(0.4);
  auto samples = std::make_shared<int>(500);
  auto seed = std::make_shared<unsigned long long>(1);
  auto out_dir = std::make_shared<std::string>();

  sc->add_option("dirs", *dirs, "Experiment directories (each with fold<k>/val_scores.csv)")
      ->required();
  sc->add_option("--gamma", *gamma, "Dirichlet concentration");
  sc->add_option("--samples", *samples, "Number of weight draws");
  sc->add_option("--seed", *seed, "Search seed");
  sc->add_option("--out-dir", *out_dir, "Directory for fusion artifacts")->required();

  sc->callback([dirs, gamma, samples, seed, out_dir] {
    if (dirs->size() < 2) {
      throw CLI::ValidationError("fuse needs at least two experiment directories");
    }
    const auto folds = list_fold_dirs((*dirs)[0]);
    std::vector<std::vector<ScoreTable>> tables(folds.size());
    std::vector<std::string> tags;
    for (const std::string& d : *dirs) tags.push_back(dir_tag(d));
    for (std::size_t fi = 0; fi < folds.size(); ++fi) {
      for (std::size_t m = 0; m < dirs->size(); ++m) {
        const std::filesystem::path p = std::filesystem::path((*dirs)[m]) /
                                        folds[fi].second.filename() / "val_scores.csv";
        ScoreTable st = read_score_table(p);
        st.model_tag = tags[m];
        tables[fi].push_back(std::move(st));
      }
    }

    std::error_code ec;
    std::filesystem::create_directories(*out_dir, ec);
    if (ec) throw IoError("cannot create " + *out_dir + ": " + ec.message());

    std::ofstream report(std::filesystem::path(*out_dir) / "search_report.csv");
    if (!report) throw IoError("cannot open search_report.csv under " + *out_dir);
    Rng rng(*seed);
    const FusionWeights w = search_weights(tables, *gamma, *samples, rng, &report);

    {
      std::ofstream wf(std::filesystem::path(*out_dir) / "weights.csv");
      if (!wf) throw IoError("cannot open weights.csv under " + *out_dir);
      wf << "model,weight\n";
      for (std::size_t m = 0; m < tags.size(); ++m) {
        wf << tags[m] << ',' << format_g17(w.a[m]) << "\n";
      }
    }
    for (std::size_t fi = 0; fi < folds.size(); ++fi) {
      const std::filesystem::path fd =
          std::filesystem::path(*out_dir) / folds[fi].second.filename();
      std::filesystem::create_directories(fd, ec);
      if (ec) throw IoError("cannot create " + fd.string() + ": " + ec.message());
      write_score_table(fd / "fused_scores.csv", fuse(tables[fi], w.a));
    }

    std::cout << "weights:";
    for (std::size_t m = 0; m < tags.size(); ++m) {
      std::cout << ' ' << tags[m] << '=' << std::fixed << std::setprecision(4) << w.a[m];
    }
    std::cout << "\nfused mean fold AUC: " << std::fixed << std::setprecision(4) << w.chosen_auc
              << " (gamma " << *gamma << ", " << *samples << " draws)\n";
  });
}

void add_eval_auc(CLI::App& app) {
  auto* sc = app.add_subcommand("eval-auc", "Ranking AUC of a labeled score table");
  auto path = std::make_shared<std::string>();
  sc->add_option("scores", *path, "CSV with id,score,label rows")->required();

  sc->callback([path] {
    const ScoreTable st = read_score_table(*path);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.4f", auc(st.scores(), st.labels()));
    std::cout << buf << "\n";
  });
}

void add_dump_centers(CLI::App& app) {
  auto* sc = app.add_subcommand(
      "dump-centers", "Write filterbank center frequencies (index,hz) as CSV");
  auto out = std::make_shared<std::string>();
  auto ckpt_path = std::make_shared<std::string>();
  auto n_filters = std::make_shared<int>(64);
  auto sample_rate = std::make_shared<int>(kDefaultSampleRate);

  sc->add_option("--out", *out, "Output CSV")->required();
  auto* ck = sc->add_option("--checkpoint", *ckpt_path, "Trained filterbank checkpoint");
  sc->add_option("--n-filters", *n_filters, "Fresh bank size (without --checkpoint)");
  sc->add_option("--sample-rate", *sample_rate, "Sample rate for the Hz conversion");

  sc->callback([out, ckpt_path, n_filters, sample_rate, ck] {
    GaussKernelBank bank;
    int sr = *sample_rate;
    if (ck->count() > 0) {
      const Checkpoint ckpt = read_checkpoint(*ckpt_path);
      if (ckpt.tag != "cosgauss_relevance_blstm") {
        throw InvalidParameterError("checkpoint '" + ckpt.tag +
                                    "' does not carry a learnable filterbank");
      }
      const Matrix& mu = ckpt.tensor("mu");
      bank.mu.assign(mu.data(), mu.data() + mu.size());
      bank.kernel_len = static_cast<int>(ckpt.meta_value("kernel_len"));
      sr = static_cast<int>(ckpt.meta_value("sample_rate"));
    } else {
      bank.mu = init_centers_mel(*n_filters, sr);
    }
    write_centers_csv(*out, dump_centers(bank, sr));
    std::cout << "wrote " << bank.mu.size() << " centers to " << *out << "\n";
  });
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Acoustic screening toolkit: synthetic data, training, fusion"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  add_synth(app);
  add_features(app);
  add_train(app);
  add_predict(app);
  add_fuse(app);
  add_eval_auc(app);
  add_dump_centers(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace auscult
