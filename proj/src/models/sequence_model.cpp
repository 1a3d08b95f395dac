// auscult/models/sequence_model.cpp
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

#include "auscult/models/sequence_model.hpp"

#include <algorithm>
#include <utility>

#include "auscult/error.hpp"
#include "auscult/frontend/cosgauss.hpp"
#include "auscult/frontend/relevance.hpp"
#include "auscult/models/blstm.hpp"
#include "auscult/models/tdnn.hpp"

namespace auscult {

namespace {

void load_into(Matrix& dst, const Checkpoint& ckpt, const std::string& name) {
  const Matrix& src = ckpt.tensor(name);
  if (!dst.same_shape(src)) {
    throw FormatError("checkpoint tensor '" + name + "' has shape " +
                      std::to_string(src.rows()) + "x" + std::to_string(src.cols()) +
                      ", model expects " + std::to_string(dst.rows()) + "x" +
                      std::to_string(dst.cols()));
  }
  dst = src;
}

class BlstmSeqModel final : public SequenceModel {
 public:
  BlstmSeqModel(int input_dim, int hidden, int fc_hidden, Rng& rng)
      : model_(BlstmClassifier::init(input_dim, hidden, fc_hidden, rng)),
        grads_(make_blstm_grads(model_)) {}

  std::string tag() const override { return "blstm"; }
  InputKind input_kind() const override { return InputKind::features; }
  int input_rows() const override { return model_.input_dim; }

  std::array<double, 2> forward(const Matrix& x) override {
    last_x_ = x;
    return blstm_forward(x, model_, cache_);
  }

  void backward(const std::array<double, 2>& dlogits) override {
    blstm_backward(dlogits, last_x_, model_, cache_, grads_, nullptr);
  }

  void zero_grads() override {
    for (Matrix* g : gradients()) g->set_zero();
  }

  std::vector<Matrix*> parameters() override {
    return {&model_.fwd.w, &model_.fwd.u, &model_.fwd.b,
            &model_.bwd.w, &model_.bwd.u, &model_.bwd.b,
            &model_.fc_w,  &model_.fc_b,  &model_.out_w, &model_.out_b};
  }

  std::vector<Matrix*> gradients() override {
    return {&grads_.fwd.w, &grads_.fwd.u, &grads_.fwd.b,
            &grads_.bwd.w, &grads_.bwd.u, &grads_.bwd.b,
            &grads_.fc_w,  &grads_.fc_b,  &grads_.out_w, &grads_.out_b};
  }

  Checkpoint to_checkpoint() const override {
    Checkpoint ckpt;
    ckpt.tag = tag();
    ckpt.add_meta("input_dim", model_.input_dim);
    ckpt.add_meta("hidden", model_.hidden);
    ckpt.add_meta("fc_hidden", model_.fc_hidden);
    ckpt.add_tensor("fwd.w", model_.fwd.w);
    ckpt.add_tensor("fwd.u", model_.fwd.u);
    ckpt.add_tensor("fwd.b", model_.fwd.b);
    ckpt.add_tensor("bwd.w", model_.bwd.w);
    ckpt.add_tensor("bwd.u", model_.bwd.u);
    ckpt.add_tensor("bwd.b", model_.bwd.b);
    ckpt.add_tensor("fc_w", model_.fc_w);
    ckpt.add_tensor("fc_b", model_.fc_b);
    ckpt.add_tensor("out_w", model_.out_w);
    ckpt.add_tensor("out_b", model_.out_b);
    return ckpt;
  }

  void load(const Checkpoint& ckpt) {
    load_into(model_.fwd.w, ckpt, "fwd.w");
    load_into(model_.fwd.u, ckpt, "fwd.u");
    load_into(model_.fwd.b, ckpt, "fwd.b");
    load_into(model_.bwd.w, ckpt, "bwd.w");
    load_into(model_.bwd.u, ckpt, "bwd.u");
    load_into(model_.bwd.b, ckpt, "bwd.b");
    load_into(model_.fc_w, ckpt, "fc_w");
    load_into(model_.fc_b, ckpt, "fc_b");
    load_into(model_.out_w, ckpt, "out_w");
    load_into(model_.out_b, ckpt, "out_b");
  }

 private:
  BlstmClassifier model_;
  BlstmGrads grads_;
  BlstmCache cache_;
  Matrix last_x_;
};

class TdnnSeqModel final : public SequenceModel {
 public:
  TdnnSeqModel(int input_dim, double width_factor, Rng& rng)
      : model_(TdnnClassifier::init(input_dim, width_factor, rng)),
        grads_(make_tdnn_grads(model_)) {}

  TdnnSeqModel(int input_dim, const std::vector<int>& channels,
               const std::vector<int>& contexts, const std::vector<int>& dilations,
               int seg_dim, Rng& rng)
      : model_(TdnnClassifier::init_custom(input_dim, channels, contexts, dilations,
                                           seg_dim, rng)),
        grads_(make_tdnn_grads(model_)) {}

  std::string tag() const override { return "tdnn"; }
  InputKind input_kind() const override { return InputKind::features; }
  int input_rows() const override { return model_.input_dim; }

  std::array<double, 2> forward(const Matrix& x) override {
    last_x_ = x;
    return tdnn_forward(x, model_, cache_);
  }

  void backward(const std::array<double, 2>& dlogits) override {
    tdnn_backward(dlogits, last_x_, model_, cache_, grads_, nullptr);
  }

  void zero_grads() override {
    for (Matrix* g : gradients()) g->set_zero();
  }

  std::vector<Matrix*> parameters() override {
    std::vector<Matrix*> p;
    for (TdnnLayer& layer : model_.layers) {
      p.push_back(&layer.w);
      p.push_back(&layer.b);
    }
    p.push_back(&model_.seg1_w);
    p.push_back(&model_.seg1_b);
    p.push_back(&model_.seg2_w);
    p.push_back(&model_.seg2_b);
    p.push_back(&model_.out_w);
    p.push_back(&model_.out_b);
    return p;
  }

  std::vector<Matrix*> gradients() override {
    std::vector<Matrix*> g;
    for (TdnnLayer& layer : grads_.layers) {
      g.push_back(&layer.w);
      g.push_back(&layer.b);
    }
    g.push_back(&grads_.seg1_w);
    g.push_back(&grads_.seg1_b);
    g.push_back(&grads_.seg2_w);
    g.push_back(&grads_.seg2_b);
    g.push_back(&grads_.out_w);
    g.push_back(&grads_.out_b);
    return g;
  }

  Checkpoint to_checkpoint() const override {
    Checkpoint ckpt;
    ckpt.tag = tag();
    ckpt.add_meta("input_dim", model_.input_dim);
    ckpt.add_meta("n_layers", static_cast<long long>(model_.layers.size()));
    ckpt.add_meta("seg_dim", model_.seg1_w.rows());
    for (std::size_t i = 0; i < model_.layers.size(); ++i) {
      const std::string p = "layer" + std::to_string(i) + ".";
      ckpt.add_meta(p + "channels", model_.layers[i].w.rows());
      ckpt.add_meta(p + "context", model_.layers[i].context);
      ckpt.add_meta(p + "dilation", model_.layers[i].dilation);
    }
    for (std::size_t i = 0; i < model_.layers.size(); ++i) {
      const std::string p = "layer" + std::to_string(i) + ".";
      ckpt.add_tensor(p + "w", model_.layers[i].w);
      ckpt.add_tensor(p + "b", model_.layers[i].b);
    }
    ckpt.add_tensor("seg1_w", model_.seg1_w);
    ckpt.add_tensor("seg1_b", model_.seg1_b);
    ckpt.add_tensor("seg2_w", model_.seg2_w);
    ckpt.add_tensor("seg2_b", model_.seg2_b);
    ckpt.add_tensor("out_w", model_.out_w);
    ckpt.add_tensor("out_b", model_.out_b);
    return ckpt;
  }

  void load(const Checkpoint& ckpt) {
    for (std::size_t i = 0; i < model_.layers.size(); ++i) {
      const std::string p = "layer" + std::to_string(i) + ".";
      load_into(model_.layers[i].w, ckpt, p + "w");
      load_into(model_.layers[i].b, ckpt, p + "b");
    }
    load_into(model_.seg1_w, ckpt, "seg1_w");
    load_into(model_.seg1_b, ckpt, "seg1_b");
    load_into(model_.seg2_w, ckpt, "seg2_w");
    load_into(model_.seg2_b, ckpt, "seg2_b");
    load_into(model_.out_w, ckpt, "out_w");
    load_into(model_.out_b, ckpt, "out_b");
  }

 private:
  TdnnClassifier model_;
  TdnnGrads grads_;
  TdnnCache cache_;
  Matrix last_x_;
};

class CosGaussRelevanceBlstm final : public SequenceModel {
 public:
  CosGaussRelevanceBlstm(const CosGaussModelConfig& cfg, Rng& rng) : cfg_(cfg) {
    if (cfg.kernel_len % 2 == 0 || cfg.kernel_len < 3) {
      throw InvalidParameterError("kernel_len must be odd and >= 3");
    }
    if (cfg.frame_len < cfg.kernel_len) {
      throw InvalidParameterError("frame_len must cover at least one kernel");
    }
    const std::vector<double> centers = init_centers_mel(cfg.n_filters, cfg.sample_rate);
    mu_ = Matrix(cfg.n_filters, 1);
    for (int i = 0; i < cfg.n_filters; ++i) mu_(i, 0) = centers[static_cast<size_t>(i)];
    mu_grad_ = Matrix(cfg.n_filters, 1);
    rel_ = RelevanceNet::init(cfg.rel_hidden, cfg.context, rng);
    rel_grads_ = {Matrix(rel_.w1.rows(), rel_.w1.cols()), Matrix(rel_.b1.rows(), 1),
                  Matrix(rel_.w2.rows(), rel_.w2.cols()), Matrix(rel_.b2.rows(), 1),
                  Matrix()};
    blstm_ = BlstmClassifier::init(cfg.n_filters, cfg.blstm_hidden, cfg.fc_hidden, rng);
    blstm_grads_ = make_blstm_grads(blstm_);
  }

  std::string tag() const override { return "cosgauss_relevance_blstm"; }
  InputKind input_kind() const override { return InputKind::frames; }
  int input_rows() const override { return cfg_.frame_len; }

  std::array<double, 2> forward(const Matrix& x) override {
    last_frames_ = x;
    GaussKernelBank bank = current_bank();
    facts_ = filterbank_forward(x, bank);
    racts_ = relevance_forward(facts_.output, rel_);
    return blstm_forward(racts_.weighted, blstm_, bcache_);
  }

  void backward(const std::array<double, 2>& dlogits) override {
    Matrix dweighted(racts_.weighted.rows(), racts_.weighted.cols());
    blstm_backward(dlogits, racts_.weighted, blstm_, bcache_, blstm_grads_, &dweighted);
    const RelevanceGrads rg = relevance_backward(dweighted, facts_.output, rel_, racts_);
    for (std::size_t i = 0; i < rel_grads_.w1.size(); ++i) {
      rel_grads_.w1.at_flat(i) += rg.w1.at_flat(i);
    }
    for (std::size_t i = 0; i < rel_grads_.b1.size(); ++i) {
      rel_grads_.b1.at_flat(i) += rg.b1.at_flat(i);
    }
    for (std::size_t i = 0; i < rel_grads_.w2.size(); ++i) {
      rel_grads_.w2.at_flat(i) += rg.w2.at_flat(i);
    }
    rel_grads_.b2.at_flat(0) += rg.b2.at_flat(0);
    const GaussKernelBank bank = current_bank();
    const FilterbankGrads fg = filterbank_backward(rg.x, last_frames_, bank, facts_);
    for (int i = 0; i < mu_grad_.rows(); ++i) {
      mu_grad_(i, 0) += fg.mu[static_cast<size_t>(i)];
    }
  }

  void zero_grads() override {
    for (Matrix* g : gradients()) g->set_zero();
  }

  std::vector<Matrix*> parameters() override {
    std::vector<Matrix*> p = {&mu_, &rel_.w1, &rel_.b1, &rel_.w2, &rel_.b2};
    p.insert(p.end(), {&blstm_.fwd.w, &blstm_.fwd.u, &blstm_.fwd.b, &blstm_.bwd.w,
                       &blstm_.bwd.u, &blstm_.bwd.b, &blstm_.fc_w, &blstm_.fc_b,
                       &blstm_.out_w, &blstm_.out_b});
    return p;
  }

  std::vector<Matrix*> gradients() override {
    std::vector<Matrix*> g = {&mu_grad_, &rel_grads_.w1, &rel_grads_.b1, &rel_grads_.w2,
                              &rel_grads_.b2};
    g.insert(g.end(), {&blstm_grads_.fwd.w, &blstm_grads_.fwd.u, &blstm_grads_.fwd.b,
                       &blstm_grads_.bwd.w, &blstm_grads_.bwd.u, &blstm_grads_.bwd.b,
                       &blstm_grads_.fc_w, &blstm_grads_.fc_b, &blstm_grads_.out_w,
                       &blstm_grads_.out_b});
    return g;
  }

  void constrain_parameters() override {
    for (int i = 0; i < mu_.rows(); ++i) {
      mu_(i, 0) = std::clamp(mu_(i, 0), kMuMin, kMuMax);
    }
  }

  Checkpoint to_checkpoint() const override {
    Checkpoint ckpt;
    ckpt.tag = tag();
    ckpt.add_meta("frame_len", cfg_.frame_len);
    ckpt.add_meta("kernel_len", cfg_.kernel_len);
    ckpt.add_meta("n_filters", cfg_.n_filters);
    ckpt.add_meta("context", cfg_.context);
    ckpt.add_meta("rel_hidden", cfg_.rel_hidden);
    ckpt.add_meta("blstm_hidden", cfg_.blstm_hidden);
    ckpt.add_meta("fc_hidden", cfg_.fc_hidden);
    ckpt.add_meta("sample_rate", cfg_.sample_rate);
    ckpt.add_tensor("mu", mu_);
    ckpt.add_tensor("rel.w1", rel_.w1);
    ckpt.add_tensor("rel.b1", rel_.b1);
    ckpt.add_tensor("rel.w2", rel_.w2);
    ckpt.add_tensor("rel.b2", rel_.b2);
    ckpt.add_tensor("fwd.w", blstm_.fwd.w);
    ckpt.add_tensor("fwd.u", blstm_.fwd.u);
    ckpt.add_tensor("fwd.b", blstm_.fwd.b);
    ckpt.add_tensor("bwd.w", blstm_.bwd.w);
    ckpt.add_tensor("bwd.u", blstm_.bwd.u);
    ckpt.add_tensor("bwd.b", blstm_.bwd.b);
    ckpt.add_tensor("fc_w", blstm_.fc_w);
    ckpt.add_tensor("fc_b", blstm_.fc_b);
    ckpt.add_tensor("out_w", blstm_.out_w);
    ckpt.add_tensor("out_b", blstm_.out_b);
    return ckpt;
  }

  void load(const Checkpoint& ckpt) {
    load_into(mu_, ckpt, "mu");
    load_into(rel_.w1, ckpt, "rel.w1");
    load_into(rel_.b1, ckpt, "rel.b1");
    load_into(rel_.w2, ckpt, "rel.w2");
    load_into(rel_.b2, ckpt, "rel.b2");
    load_into(blstm_.fwd.w, ckpt, "fwd.w");
    load_into(blstm_.fwd.u, ckpt, "fwd.u");
    load_into(blstm_.fwd.b, ckpt, "fwd.b");
    load_into(blstm_.bwd.w, ckpt, "bwd.w");
    load_into(blstm_.bwd.u, ckpt, "bwd.u");
    load_into(blstm_.bwd.b, ckpt, "bwd.b");
    load_into(blstm_.fc_w, ckpt, "fc_w");
    load_into(blstm_.fc_b, ckpt, "fc_b");
    load_into(blstm_.out_w, ckpt, "out_w");
    load_into(blstm_.out_b, ckpt, "out_b");
  }

  const Matrix& filter_centers() const { return mu_; }

 private:
  GaussKernelBank current_bank() const {
    GaussKernelBank bank;
    bank.kernel_len = cfg_.kernel_len;
    bank.mu.resize(static_cast<size_t>(mu_.rows()));
    for (int i = 0; i < mu_.rows(); ++i) bank.mu[static_cast<size_t>(i)] = mu_(i, 0);
    return bank;
  }

  CosGaussModelConfig cfg_;
  Matrix mu_, mu_grad_;
  RelevanceNet rel_;
  RelevanceGrads rel_grads_;
  BlstmClassifier blstm_;
  BlstmGrads blstm_grads_;
  BlstmCache bcache_;
  FilterbankActs facts_;
  RelevanceActs racts_;
  Matrix last_frames_;
};

}  // namespace

std::unique_ptr<SequenceModel> make_blstm_model(int input_dim, int hidden, int fc_hidden,
                                                Rng& rng) {
  return std::make_unique<BlstmSeqModel>(input_dim, hidden, fc_hidden, rng);
}

std::unique_ptr<SequenceModel> make_tdnn_model(int input_dim, double width_factor,
                                               Rng& rng) {
  return std::make_unique<TdnnSeqModel>(input_dim, width_factor, rng);
}

std::unique_ptr<SequenceModel> make_cosgauss_model(const CosGaussModelConfig& cfg,
                                                   Rng& rng) {
  return std::make_unique<CosGaussRelevanceBlstm>(cfg, rng);
}

std::unique_ptr<SequenceModel> model_from_checkpoint(const Checkpoint& ckpt) {
  Rng init_rng(0);  // placeholder weights, overwritten by load()
  if (ckpt.tag == "blstm") {
    auto m = std::make_unique<BlstmSeqModel>(
        static_cast<int>(ckpt.meta_value("input_dim")),
        static_cast<int>(ckpt.meta_value("hidden")),
        static_cast<int>(ckpt.meta_value("fc_hidden")), init_rng);
    m->load(ckpt);
    return m;
  }
  if (ckpt.tag == "tdnn") {
    const int n_layers = static_cast<int>(ckpt.meta_value("n_layers"));
    std::vector<int> channels, contexts, dilations;
    for (int i = 0; i < n_layers; ++i) {
      const std::string p = "layer" + std::to_string(i) + ".";
      channels.push_back(static_cast<int>(ckpt.meta_value(p + "channels")));
      contexts.push_back(static_cast<int>(ckpt.meta_value(p + "context")));
      dilations.push_back(static_cast<int>(ckpt.meta_value(p + "dilation")));
    }
    auto m = std::make_unique<TdnnSeqModel>(
        static_cast<int>(ckpt.meta_value("input_dim")), channels, contexts, dilations,
        static_cast<int>(ckpt.meta_value("seg_dim")), init_rng);
    m->load(ckpt);
    return m;
  }
  if (ckpt.tag == "cosgauss_relevance_blstm") {
    CosGaussModelConfig cfg;
    cfg.frame_len = static_cast<int>(ckpt.meta_value("frame_len"));
    cfg.kernel_len = static_cast<int>(ckpt.meta_value("kernel_len"));
    cfg.n_filters = static_cast<int>(ckpt.meta_value("n_filters"));
    cfg.context = static_cast<int>(ckpt.meta_value("context"));
    cfg.rel_hidden = static_cast<int>(ckpt.meta_value("rel_hidden"));
    cfg.blstm_hidden = static_cast<int>(ckpt.meta_value("blstm_hidden"));
    cfg.fc_hidden = static_cast<int>(ckpt.meta_value("fc_hidden"));
    cfg.sample_rate = static_cast<int>(ckpt.meta_value("sample_rate"));
    auto m = std::make_unique<CosGaussRelevanceBlstm>(cfg, init_rng);
    m->load(ckpt);
    return m;
  }
  throw FormatError("unknown checkpoint architecture tag '" + ckpt.tag + "'");
}

}  // namespace auscult
