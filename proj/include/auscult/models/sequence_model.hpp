// auscult/models/sequence_model.hpp
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
// Uniform trainable-model interface over the classifier zoo, so one training
// loop and one optimizer serve every architecture.

#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "auscult/models/checkpoint.hpp"
#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace auscult {

// What the model consumes: precomputed feature columns (F x T) or raw framed
// audio (frame_len x T) for architectures with a learnable front end.
enum class InputKind { features, frames };

class SequenceModel {
 public:
  virtual ~SequenceModel() = default;

  virtual std::string tag() const = 0;
  virtual InputKind input_kind() const = 0;
  virtual int input_rows() const = 0;

  // forward caches activations for exactly one pending backward.
  virtual std::array<double, 2> forward(const Matrix& x) = 0;
  // Accumulates (+=) into the owned gradient buffers using the last forward.
  virtual void backward(const std::array<double, 2>& dlogits) = 0;
  virtual void zero_grads() = 0;

  // Parameter and gradient tensors, aligned index by index, in the fixed
  // declaration order used by checkpoints.
  virtual std::vector<Matrix*> parameters() = 0;
  virtual std::vector<Matrix*> gradients() = 0;
  // Post-step projection back onto the feasible set (e.g. filter centers
  // clamped inside (0, Nyquist)).  Default: nothing to constrain.
  virtual void constrain_parameters() {}

  virtual Checkpoint to_checkpoint() const = 0;
};

std::unique_ptr<SequenceModel> make_blstm_model(int input_dim, int hidden, int fc_hidden,
                                                Rng& rng);
std::unique_ptr<SequenceModel> make_tdnn_model(int input_dim, double width_factor,
                                               Rng& rng);

struct CosGaussModelConfig {
  int frame_len = 1102;
  int kernel_len = 353;
  int n_filters = 64;
  int context = 51;       // relevance context half-width
  int rel_hidden = 50;
  int blstm_hidden = 64;
  int fc_hidden = 64;
  int sample_rate = 44100;  // used only to seed filter centers on the mel axis
};

// Learnable cosine-Gaussian filterbank -> relevance weighting -> BLSTM.
// Consumes raw framed audio; the filter centers are part of parameters() and
// are clamped by constrain_parameters() after every optimizer step.
std::unique_ptr<SequenceModel> make_cosgauss_model(const CosGaussModelConfig& cfg,
                                                   Rng& rng);

// Rebuilds any architecture this library can train.  FormatError on unknown
// tags or mismatched tensor shapes.
std::unique_ptr<SequenceModel> model_from_checkpoint(const Checkpoint& ckpt);

}  // namespace auscult
