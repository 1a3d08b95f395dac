// auscult/pipeline/experiment.cpp
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

#include "auscult/pipeline/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>

#include "auscult/error.hpp"
#include "auscult/frontend/framing.hpp"
#include "auscult/frontend/mel.hpp"
#include "auscult/fusion/auc.hpp"
#include "auscult/fusion/score_table.hpp"
#include "auscult/models/checkpoint.hpp"
#include "auscult/models/embed_head.hpp"
#include "auscult/models/sequence_model.hpp"
#include "auscult/models/tdnn.hpp"
#include "auscult/pipeline/manifest.hpp"
#include "auscult/pipeline/wav.hpp"
#include "auscult/trainer/config.hpp"
#include "auscult/trainer/loop.hpp"

namespace auscult {
namespace {

// Child-stream slots under the experiment seed; fold index is added so every
// fold trains on its own independent stream.
constexpr std::uint64_t kTrainerStreamBase = 100;
constexpr std::uint64_t kModelInitStreamBase = 200;
constexpr std::uint64_t kHeadStreamBase = 300;

bool is_sequence_system(const std::string& s) {
  return s == "plain_blstm" || s == "mixup_blstm" || s == "cosgauss_relevance" || s == "tdnn";
}

void validate_config(const ExperimentConfig& c) {
  if (!is_sequence_system(c.system) && c.system != "embed_head") {
    throw InvalidConfigError(
        "unknown system '" + c.system +
        "' (expected plain_blstm, mixup_blstm, cosgauss_relevance, tdnn, or embed_head)");
  }
  if (c.mel_bands < 1) throw InvalidConfigError("mel_bands must be >= 1");
  if (c.frame_len < 2) throw InvalidConfigError("frame_len must be >= 2");
  if (c.hop < 1) throw InvalidConfigError("hop must be >= 1");
  if (c.sample_rate < 1) throw InvalidConfigError("sample_rate must be >= 1");
  if (c.epochs < 1) throw InvalidConfigError("epochs must be >= 1");
  if (c.batch_size < 2) throw InvalidConfigError("batch_size must be >= 2");
  if (c.system == "embed_head") {
    if (c.pca_components < 1 || c.pca_components > 2 * c.mel_bands) {
      throw InvalidConfigError("pca_components must be in [1, 2*mel_bands]");
    }
    if (c.class_weight != "balanced" && c.class_weight != "none") {
      throw InvalidConfigError("class_weight must be 'balanced' or 'none'");
    }
    if (!(c.logreg_c > 0.0)) throw InvalidConfigError("logreg_c must be positive");
  }
}

struct ClipData {
  ManifestEntry entry;
  Matrix x;                   // F x T features or frame_len x T frames
  std::vector<double> embed;  // embed_head only
};

std::vector<ClipData> load_clips(const ExperimentConfig& cfg,
                                 const std::vector<ManifestEntry>& entries) {
  const std::filesystem::path base = cfg.manifest.parent_path();
  const bool frames_in = cfg.system == "cosgauss_relevance";
  const bool embed_in = cfg.system == "embed_head";

  std::vector<ClipData> clips;
  clips.reserve(entries.size());
  for (const ManifestEntry& e : entries) {
    std::filesystem::path wav_path = e.path;
    if (wav_path.is_relative()) wav_path = base / wav_path;
    const Waveform w = load_wav(wav_path);
    if (w.sample_rate != cfg.sample_rate) {
      throw FormatError("clip " + e.id + ": sample rate " + std::to_string(w.sample_rate) +
                        " does not match the configured " + std::to_string(cfg.sample_rate) +
                        " (this pipeline does not resample)");
    }
    ClipData c;
    c.entry = e;
    if (frames_in) {
      c.x = frame_signal(w, cfg.frame_len, cfg.hop);
    } else {
      TimeFreqRepr repr = mel_frontend(w, cfg.mel_bands, cfg.frame_len, cfg.hop);
      if (embed_in) {
        c.embed = stats_pool(repr.data);
      } else {
        c.x = std::move(repr.data);
      }
    }
    clips.push_back(std::move(c));
  }
  return clips;
}

std::unique_ptr<SequenceModel> make_system_model(const ExperimentConfig& cfg, Rng& rng) {
  if (cfg.system == "plain_blstm" || cfg.system == "mixup_blstm") {
    return make_blstm_model(cfg.mel_bands, cfg.blstm_hidden, cfg.fc_hidden, rng);
  }
  if (cfg.system == "tdnn") {
    return make_tdnn_model(cfg.mel_bands, cfg.tdnn_width, rng);
  }
  CosGaussModelConfig mc;
  mc.frame_len = cfg.frame_len;
  mc.kernel_len = cfg.kernel_len;
  mc.n_filters = cfg.mel_bands;  // same band count as the mel baseline
  mc.context = cfg.rel_context;
  mc.rel_hidden = cfg.rel_hidden;
  mc.blstm_hidden = cfg.blstm_hidden;
  mc.fc_hidden = cfg.fc_hidden;
  mc.sample_rate = cfg.sample_rate;
  return make_cosgauss_model(mc, rng);
}

ScoreTable score_validation(SequenceModel& model, const std::vector<Sample>& val, double tau,
                            const std::string& tag) {
  ScoreTable st;
  st.model_tag = tag;
  st.rows.reserve(val.size());
  for (const Sample& s : val) {
    ScoreRow row;
    row.id = s.id;
    row.score = predict_positive(model, s.x, tau);
    row.label = s.label;
    st.rows.push_back(std::move(row));
  }
  return st;
}

FoldSummary run_sequence_fold(const ExperimentConfig& cfg, int fold,
                              const std::vector<ClipData>& clips,
                              const std::filesystem::path& fold_dir) {
  std::vector<Sample> train, val;
  for (const ClipData& c : clips) {
    Sample s;
    s.id = c.entry.id;
    s.x = c.x;
    s.label = c.entry.label;
    (c.entry.fold == fold ? val : train).push_back(std::move(s));
  }

  Rng init_rng = Rng(cfg.seed).child(kModelInitStreamBase + static_cast<std::uint64_t>(fold));
  std::unique_ptr<SequenceModel> model = make_system_model(cfg, init_rng);

  TrainConfig tc;
  tc.use_mixup = cfg.system == "mixup_blstm";
  tc.alpha = cfg.alpha;
  tc.tau = cfg.tau;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.seed = Rng(cfg.seed).child(kTrainerStreamBase + static_cast<std::uint64_t>(fold)).next_u64();
  tc.lr0 = cfg.lr0;
  tc.use_lr_schedule = cfg.use_lr_schedule;
  tc.schedule = LrSchedule{cfg.lr0, cfg.lr_factor, cfg.lr_step_epochs, cfg.epochs};

  std::ofstream log(fold_dir / "train_log.csv");
  if (!log) throw IoError("cannot open " + (fold_dir / "train_log.csv").string());

  Trainer trainer(*model, tc);
  const FitResult fit = trainer.fit(train, val, &log);

  write_checkpoint(fold_dir / "checkpoint.bin", fit.best_checkpoint);

  // Score with the best epoch's weights, exercising the checkpoint path.
  std::unique_ptr<SequenceModel> best = model_from_checkpoint(fit.best_checkpoint);
  const ScoreTable st = score_validation(*best, val, cfg.tau, cfg.system);
  write_score_table(fold_dir / "val_scores.csv", st);

  FoldSummary fs;
  fs.fold = fold;
  fs.n_train = static_cast<int>(train.size());
  fs.n_val = static_cast<int>(val.size());
  fs.val_auc = auc(st.scores(), st.labels());
  fs.best_val_loss = fit.best_val_loss;
  return fs;
}

FoldSummary run_embed_fold(const ExperimentConfig& cfg, int fold,
                           const std::vector<ClipData>& clips,
                           const std::filesystem::path& fold_dir) {
  std::vector<const ClipData*> train, val;
  for (const ClipData& c : clips) (c.entry.fold == fold ? val : train).push_back(&c);

  const int dim = static_cast<int>(train.front()->embed.size());
  Matrix x(static_cast<int>(train.size()), dim);
  std::vector<int> y(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    for (int d = 0; d < dim; ++d) x(static_cast<int>(i), d) = train[i]->embed[d];
    y[i] = train[i]->entry.label;
  }

  Rng rng = Rng(cfg.seed).child(kHeadStreamBase + static_cast<std::uint64_t>(fold));
  const ClassWeight cw =
      cfg.class_weight == "balanced" ? ClassWeight::balanced : ClassWeight::none;
  const EmbeddingHead head =
      EmbeddingHead::fit(x, y, cfg.pca_components, cfg.logreg_c, cw, rng);

  std::ofstream log(fold_dir / "train_log.csv");
  if (!log) throw IoError("cannot open " + (fold_dir / "train_log.csv").string());
  log << "iteration,loss\n" << std::setprecision(17);
  for (std::size_t i = 0; i < head.clf.loss_history.size(); ++i) {
    log << i << ',' << head.clf.loss_history[i] << "\n";
  }

  ScoreTable st;
  st.model_tag = cfg.system;
  st.rows.reserve(val.size());
  for (const ClipData* c : val) {
    ScoreRow row;
    row.id = c->entry.id;
    row.score = head.score(c->embed);
    row.label = c->entry.label;
    st.rows.push_back(std::move(row));
  }
  write_score_table(fold_dir / "val_scores.csv", st);

  FoldSummary fs;
  fs.fold = fold;
  fs.n_train = static_cast<int>(train.size());
  fs.n_val = static_cast<int>(val.size());
  fs.val_auc = auc(st.scores(), st.labels());
  fs.best_val_loss = std::numeric_limits<double>::quiet_NaN();
  return fs;
}

}  // namespace

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  const KeyValueConfig kv = KeyValueConfig::from_file(path);
  ExperimentConfig c;
  c.system = kv.require_string("system");
  std::filesystem::path mp = kv.require_string("manifest");
  if (mp.is_relative()) mp = path.parent_path() / mp;
  c.manifest = mp;

  c.mel_bands = kv.get_int("mel_bands", c.mel_bands);
  c.frame_len = kv.get_int("frame_len", c.frame_len);
  c.hop = kv.get_int("hop", c.hop);
  c.sample_rate = kv.get_int("sample_rate", c.sample_rate);

  c.epochs = kv.get_int("epochs", c.epochs);
  c.batch_size = kv.get_int("batch_size", c.batch_size);
  c.alpha = kv.get_double("alpha", c.alpha);
  c.tau = kv.get_double("tau", c.tau);
  c.lr0 = kv.get_double("lr0", c.lr0);
  c.use_lr_schedule = kv.get_bool("use_lr_schedule", c.use_lr_schedule);
  c.lr_factor = kv.get_double("lr_factor", c.lr_factor);
  c.lr_step_epochs = kv.get_int("lr_step_epochs", c.lr_step_epochs);
  c.seed = kv.get_u64("seed", c.seed);

  c.blstm_hidden = kv.get_int("blstm_hidden", c.blstm_hidden);
  c.fc_hidden = kv.get_int("fc_hidden", c.fc_hidden);
  c.kernel_len = kv.get_int("kernel_len", c.kernel_len);
  c.rel_context = kv.get_int("rel_context", c.rel_context);
  c.rel_hidden = kv.get_int("rel_hidden", c.rel_hidden);
  c.tdnn_width = kv.get_double("tdnn_width", c.tdnn_width);

  c.pca_components = kv.get_int("pca_components", c.pca_components);
  c.logreg_c = kv.get_double("logreg_c", c.logreg_c);
  c.class_weight = kv.get_string("class_weight", c.class_weight);

  kv.reject_unknown();
  validate_config(c);
  return c;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* out) {
  validate_config(cfg);
  if (cfg.out_dir.empty()) throw InvalidConfigError("experiment out_dir is not set");

  const std::vector<ManifestEntry> entries = read_manifest(cfg.manifest);
  if (entries.empty()) throw FormatError("manifest " + cfg.manifest.string() + " has no rows");

  std::set<int> fold_set;
  for (const ManifestEntry& e : entries) fold_set.insert(e.fold);
  for (int f : fold_set) {
    int pos = 0, neg = 0;
    for (const ManifestEntry& e : entries) {
      if (e.fold != f) continue;
      (e.label == 1 ? pos : neg)++;
    }
    if (pos == 0 || neg == 0) {
      throw DegenerateLabelError("fold " + std::to_string(f) +
                                 " validation split lacks one class (" + std::to_string(pos) +
                                 " positive, " + std::to_string(neg) + " negative)");
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw IoError("cannot create " + cfg.out_dir.string() + ": " + ec.message());

  const std::vector<ClipData> clips = load_clips(cfg, entries);

  ExperimentResult result;
  result.system = cfg.system;
  for (int f : fold_set) {
    const std::filesystem::path fold_dir = cfg.out_dir / ("fold" + std::to_string(f));
    std::filesystem::create_directories(fold_dir, ec);
    if (ec) throw IoError("cannot create " + fold_dir.string() + ": " + ec.message());
    try {
      result.folds.push_back(cfg.system == "embed_head"
                                 ? run_embed_fold(cfg, f, clips, fold_dir)
                                 : run_sequence_fold(cfg, f, clips, fold_dir));
    } catch (const Error& e) {
      throw Error("fold " + std::to_string(f) + ": " + e.what());
    }
  }

  double sum = 0.0;
  for (const FoldSummary& fs : result.folds) sum += fs.val_auc;
  result.mean_auc = sum / static_cast<double>(result.folds.size());

  {
    std::ofstream summary(cfg.out_dir / "summary.csv");
    if (!summary) throw IoError("cannot open " + (cfg.out_dir / "summary.csv").string());
    summary << "fold,n_train,n_val,val_auc,best_val_loss\n" << std::setprecision(17);
    for (const FoldSummary& fs : result.folds) {
      summary << fs.fold << ',' << fs.n_train << ',' << fs.n_val << ',' << fs.val_auc << ',';
      if (std::isfinite(fs.best_val_loss)) summary << fs.best_val_loss;
      summary << "\n";
    }
  }

  if (out != nullptr) {
    *out << "system: " << cfg.system << "\n";
    *out << std::setw(6) << "fold" << std::setw(9) << "n_train" << std::setw(7) << "n_val"
         << std::setw(9) << "AUC" << "\n";
    *out << std::fixed << std::setprecision(4);
    for (const FoldSummary& fs : result.folds) {
      *out << std::setw(6) << fs.fold << std::setw(9) << fs.n_train << std::setw(7) << fs.n_val
           << std::setw(9) << fs.val_auc << "\n";
    }
    *out << "mean fold AUC: " << result.mean_auc << "\n";
    out->unsetf(std::ios::fixed);
  }
  return result;
}

}  // namespace auscult
