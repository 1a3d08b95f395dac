// auscult/pipeline/experiment.hpp
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
// Cross-validated experiment driver: manifest in, per-fold training
// artifacts and validation score tables out, mean fold AUC printed.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace auscult {

// One trainable system per tag:
//   plain_blstm         log-mel -> BLSTM, plain BCE
//   mixup_blstm         log-mel -> BLSTM, blended-batch training
//   cosgauss_relevance  learnable filterbank -> relevance gate -> BLSTM
//   tdnn                log-mel -> dilated TDNN with stats pooling
//   embed_head          clip embedding -> standardize -> PCA -> logreg
struct ExperimentConfig {
  std::string system;
  std::filesystem::path manifest;
  std::filesystem::path out_dir;

  // Front end.
  int mel_bands = 32;
  int frame_len = 1102;
  int hop = 441;
  int sample_rate = 44100;  // every WAV must match; there is no resampler

  // Trainer.
  int epochs = 12;
  int batch_size = 16;
  double alpha = 0.4;
  double tau = 1.0;
  double lr0 = 0.001;
  bool use_lr_schedule = false;
  double lr_factor = 0.9085;
  int lr_step_epochs = 2;
  std::uint64_t seed = 1;

  // BLSTM-family dials.
  int blstm_hidden = 64;
  int fc_hidden = 64;

  // Learnable-filterbank dials.
  int kernel_len = 353;
  int rel_context = 51;
  int rel_hidden = 50;

  // TDNN dial.
  double tdnn_width = 1.0;

  // Embedding-head dials.
  int pca_components = 8;
  double logreg_c = 1.0;
  std::string class_weight = "balanced";  // balanced | none
};

// Parses a key=value config file.  `manifest` is resolved against the config
// file's directory; `out_dir` is not set here (the caller supplies it).
// Unknown keys raise InvalidConfigError.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct FoldSummary {
  int fold = 0;
  int n_train = 0;
  int n_val = 0;
  double val_auc = 0.0;
  double best_val_loss = 0.0;  // NaN for systems without an epoch loop
};

struct ExperimentResult {
  std::string system;
  std::vector<FoldSummary> folds;
  double mean_auc = 0.0;
};

// Trains the configured system on every fold of the manifest (fold f
// validates, the rest train), writing per-fold artifacts under
// out_dir/fold<f>/: train_log.csv, val_scores.csv, and checkpoint.bin for
// sequence models.  A summary table goes to `out` when non-null and to
// out_dir/summary.csv.  Any fold failure aborts with the fold index in the
// message.  Deterministic for a fixed (config, manifest) pair.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* out);

}  // namespace auscult
