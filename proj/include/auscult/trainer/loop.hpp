// auscult/trainer/loop.hpp
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
// Training loops over SequenceModel: plain BCE and the blended-batch variant.
// Both share batching, the temperature softmax head, Adam, and determinism
// contracts; with the blend weight pinned to 1 the two produce bitwise
// identical loss trajectories for the same seed.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "auscult/models/sequence_model.hpp"
#include "auscult/trainer/adam.hpp"
#include "auscult/trainer/schedule.hpp"

namespace auscult {

struct Sample {
  std::string id;
  Matrix x;  // F x T features or frame_len x T framed audio, per model input kind
  int label = 0;
};

struct TrainConfig {
  bool use_mixup = false;
  double alpha = 0.4;      // Beta concentration for the blend weight
  double tau = 1.0;        // softmax temperature on the logits
  int epochs = 20;
  int batch_size = 16;
  unsigned long long seed = 1;
  double lr0 = 0.001;            // constant rate when use_lr_schedule is off
  bool use_lr_schedule = false;  // step-annealed rate (TDNN recipe)
  LrSchedule schedule;
};

// Positive-class probability: softmax(logits / tau)[1].
double predict_positive(SequenceModel& model, const Matrix& x, double tau);

// Mean BCE loss and ranking AUC over a split.  AUC is NaN when the split
// holds a single class.
struct EvalResult {
  double loss = 0.0;
  double auc = 0.0;
};
EvalResult evaluate(SequenceModel& model, const std::vector<Sample>& data, double tau);

// Consecutive [start, end) chunks of batch_size; a trailing 1-sample chunk is
// merged into its predecessor so every batch can be blended pairwise.  Both
// training loops use this same partition.
std::vector<std::pair<int, int>> batch_ranges(int n, int batch_size);

// One epoch of plain BCE training.  Shuffles with order_rng, averages the
// loss per batch, applies one Adam step per batch at the given rate, then
// re-clamps constrained parameters.  Returns the mean per-sample loss.
// Throws NonFiniteLossError (batch index, blend stats in the message) the
// moment a loss or logit stops being finite.
double train_epoch_plain(SequenceModel& model, const std::vector<Sample>& data,
                         const TrainConfig& cfg, double lr, Adam& adam, Rng& order_rng);

// One epoch of blended-batch training: per-sample Beta(alpha,alpha) weights,
// one shared shuffle per batch, loss = lam*bce(y_hat, y) +
// (1-lam)*bce(y_hat, y_partner).  force_lambda pins the weight (test hook).
double train_epoch_mixup(SequenceModel& model, const std::vector<Sample>& data,
                         const TrainConfig& cfg, double lr, Adam& adam, Rng& order_rng,
                         Rng& mix_rng,
                         std::optional<double> force_lambda = std::nullopt);

struct FitResult {
  std::vector<double> train_loss;  // per epoch
  std::vector<double> val_loss;
  std::vector<double> val_auc;
  std::vector<double> lr;
  int best_epoch = -1;  // lowest validation loss
  double best_val_loss = 0.0;
  Checkpoint best_checkpoint;
  std::vector<std::string> notes;
};

// Full run: epochs of training with per-epoch validation, CSV log rows
// `epoch,split,loss,auc,lr` (train rows leave auc empty), best model kept by
// lowest validation loss.  Deterministic given (seed, config, data order).
class Trainer {
 public:
  Trainer(SequenceModel& model, const TrainConfig& cfg);

  FitResult fit(const std::vector<Sample>& train, const std::vector<Sample>& val,
                std::ostream* csv_log);

  // Pins every blend weight when set; used by reduction tests.
  std::optional<double> force_lambda;

 private:
  SequenceModel& model_;
  TrainConfig cfg_;
};

}  // namespace auscult
