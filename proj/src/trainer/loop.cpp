// auscult/trainer/loop.cpp
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

#include "auscult/trainer/loop.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "auscult/error.hpp"
#include "auscult/fusion/auc.hpp"
#include "auscult/numerics/activations.hpp"
#include "auscult/trainer/mixup.hpp"

namespace auscult {

double predict_positive(SequenceModel& model, const Matrix& x, double tau) {
  const std::array<double, 2> logits = model.forward(x);
  return softmax_with_temperature(std::span<const double>(logits.data(), 2), tau)[1];
}

EvalResult evaluate(SequenceModel& model, const std::vector<Sample>& data, double tau) {
  if (data.empty()) throw InvalidParameterError("evaluate needs a non-empty split");
  EvalResult res;
  std::vector<double> scores;
  std::vector<int> labels;
  scores.reserve(data.size());
  labels.reserve(data.size());
  double loss_sum = 0.0;
  for (const Sample& s : data) {
    const double p = predict_positive(model, s.x, tau);
    loss_sum += bce_loss(p, s.label);
    scores.push_back(p);
    labels.push_back(s.label);
  }
  res.loss = loss_sum / static_cast<double>(data.size());
  const long pos = std::count(labels.begin(), labels.end(), 1);
  res.auc = (pos > 0 && pos < static_cast<long>(labels.size()))
                ? auc(scores, labels)
                : std::numeric_limits<double>::quiet_NaN();
  return res;
}

std::vector<std::pair<int, int>> batch_ranges(int n, int batch_size) {
  if (n < 1) throw InvalidParameterError("batch partition needs at least 1 sample");
  if (batch_size < 2) throw InvalidParameterError("batch_size must be >= 2");
  std::vector<std::pair<int, int>> ranges;
  for (int s = 0; s < n; s += batch_size) {
    ranges.emplace_back(s, std::min(n, s + batch_size));
  }
  // A lone trailing sample cannot be blended with a partner; fold it into the
  // previous batch so both training loops see the same partition.
  if (ranges.size() >= 2 && ranges.back().second - ranges.back().first == 1) {
    ranges[ranges.size() - 2].second = ranges.back().second;
    ranges.pop_back();
  }
  return ranges;
}

namespace {

std::string lambda_stats(const std::vector<double>& lam) {
  double lo = lam[0], hi = lam[0], sum = 0.0;
  for (double v : lam) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    sum += v;
  }
  std::ostringstream os;
  os << "lambda min=" << lo << " max=" << hi << " mean=" << sum / static_cast<double>(lam.size());
  return os.str();
}

void validate_train_config(const TrainConfig& cfg) {
  if (!(cfg.alpha > 0.0)) throw InvalidParameterError("alpha must be positive");
  if (!(cfg.tau > 0.0)) throw InvalidParameterError("tau must be positive");
  if (cfg.epochs < 1) throw InvalidParameterError("epochs must be >= 1");
  if (cfg.batch_size < 2) throw InvalidParameterError("batch_size must be >= 2");
  if (!(cfg.lr0 >= 0.0)) throw InvalidParameterError("lr0 must be >= 0");
}

// One epoch shared by both loops: when mix_rng is null every blend weight is
// exactly 1 and no partner shuffle is drawn, which reduces term by term to
// plain BCE (1*x + 0*y = x holds bitwise for the values that arise here).
double run_epoch(SequenceModel& model, const std::vector<Sample>& data,
                 const TrainConfig& cfg, double lr, Adam& adam, Rng& order_rng,
                 Rng* mix_rng, std::optional<double> force_lambda) {
  validate_train_config(cfg);
  if (data.empty()) throw InvalidParameterError("training split is empty");
  const int n = static_cast<int>(data.size());
  const std::vector<int> order = order_rng.permutation(n);
  const std::vector<std::pair<int, int>> ranges = batch_ranges(n, cfg.batch_size);

  const std::vector<Matrix*> params = model.parameters();
  const std::vector<Matrix*> grads = model.gradients();

  double loss_sum = 0.0;
  for (std::size_t bi = 0; bi < ranges.size(); ++bi) {
    const auto [start, end] = ranges[bi];
    const int m = end - start;
    std::vector<Matrix> xs;
    std::vector<int> ys;
    xs.reserve(static_cast<size_t>(m));
    ys.reserve(static_cast<size_t>(m));
    for (int i = start; i < end; ++i) {
      const Sample& s = data[static_cast<size_t>(order[static_cast<size_t>(i)])];
      xs.push_back(s.x);
      ys.push_back(s.label);
    }

    std::vector<Matrix> inputs;
    std::vector<int> y_m, y_n;
    std::vector<double> lam;
    if (mix_rng != nullptr) {
      MiniBatch batch = mixup_batch(xs, ys, cfg.alpha, *mix_rng, force_lambda);
      inputs = std::move(batch.x);
      y_m = batch.y;
      y_n.resize(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) y_n[static_cast<size_t>(i)] = batch.partner_label(i);
      lam = std::move(batch.lambda);
    } else {
      inputs = std::move(xs);
      y_m = ys;
      y_n = ys;
      lam.assign(static_cast<size_t>(m), 1.0);
    }

    model.zero_grads();
    double batch_loss = 0.0;
    for (int i = 0; i < m; ++i) {
      const std::array<double, 2> logits = model.forward(inputs[static_cast<size_t>(i)]);
      if (!std::isfinite(logits[0]) || !std::isfinite(logits[1])) {
        throw NonFiniteLossError("non-finite logits in batch " + std::to_string(bi) +
                                 " (" + lambda_stats(lam) + ")");
      }
      const double p =
          softmax_with_temperature(std::span<const double>(logits.data(), 2), cfg.tau)[1];
      const double li = lam[static_cast<size_t>(i)];
      const double loss = li * bce_loss(p, y_m[static_cast<size_t>(i)]) +
                          (1.0 - li) * bce_loss(p, y_n[static_cast<size_t>(i)]);
      if (!std::isfinite(loss)) {
        throw NonFiniteLossError("non-finite loss in batch " + std::to_string(bi) + " (" +
                                 lambda_stats(lam) + ")");
      }
      batch_loss += loss;
      const double dbce = li * bce_loss_dyhat(p, y_m[static_cast<size_t>(i)]) +
                          (1.0 - li) * bce_loss_dyhat(p, y_n[static_cast<size_t>(i)]);
      // p = sigmoid((z1 - z0)/tau), so dp/dz1 = p(1-p)/tau = -dp/dz0; the
      // 1/m factor folds the batch mean into the per-sample upstream.
      const double q = dbce * p * (1.0 - p) / cfg.tau / static_cast<double>(m);
      model.backward({-q, q});
    }
    adam.step(params, grads, lr);
    model.constrain_parameters();
    loss_sum += batch_loss;
  }
  return loss_sum / static_cast<double>(n);
}

}  // namespace

double train_epoch_plain(SequenceModel& model, const std::vector<Sample>& data,
                         const TrainConfig& cfg, double lr, Adam& adam, Rng& order_rng) {
  return run_epoch(model, data, cfg, lr, adam, order_rng, nullptr, std::nullopt);
}

double train_epoch_mixup(SequenceModel& model, const std::vector<Sample>& data,
                         const TrainConfig& cfg, double lr, Adam& adam, Rng& order_rng,
                         Rng& mix_rng, std::optional<double> force_lambda) {
  return run_epoch(model, data, cfg, lr, adam, order_rng, &mix_rng, force_lambda);
}

Trainer::Trainer(SequenceModel& model, const TrainConfig& cfg) : model_(model), cfg_(cfg) {
  validate_train_config(cfg);
  if (cfg.use_lr_schedule && cfg.epochs > cfg.schedule.total_epochs) {
    throw InvalidConfigError("epochs exceed the learning-rate schedule span");
  }
}

FitResult Trainer::fit(const std::vector<Sample>& train, const std::vector<Sample>& val,
                       std::ostream* csv_log) {
  FitResult res;
  res.best_val_loss = std::numeric_limits<double>::infinity();
  Adam adam(model_.parameters());
  Rng root(cfg_.seed);
  Rng order_rng = root.child(1);
  Rng mix_rng = root.child(2);
  if (csv_log != nullptr) *csv_log << "epoch,split,loss,auc,lr\n";
  for (int epoch = 0; epoch < cfg_.epochs; ++epoch) {
    const double lr = cfg_.use_lr_schedule ? lr_at(epoch, cfg_.schedule) : cfg_.lr0;
    const double train_loss =
        cfg_.use_mixup
            ? train_epoch_mixup(model_, train, cfg_, lr, adam, order_rng, mix_rng,
                                force_lambda)
            : train_epoch_plain(model_, train, cfg_, lr, adam, order_rng);
    const EvalResult ev = evaluate(model_, val, cfg_.tau);
    res.train_loss.push_back(train_loss);
    res.val_loss.push_back(ev.loss);
    res.val_auc.push_back(ev.auc);
    res.lr.push_back(lr);
    if (csv_log != nullptr) {
      *csv_log << std::setprecision(10) << epoch << ",train," << train_loss << ",," << lr
               << "\n";
      *csv_log << epoch << ",val," << ev.loss << ",";
      if (std::isfinite(ev.auc)) *csv_log << ev.auc;
      *csv_log << "," << lr << "\n";
    }
    if (ev.loss < res.best_val_loss) {
      res.best_val_loss = ev.loss;
      res.best_epoch = epoch;
      res.best_checkpoint = model_.to_checkpoint();
    }
  }
  if (cfg_.use_lr_schedule) res.notes.push_back(lr_schedule_note(cfg_.schedule));
  return res;
}

}  // namespace auscult
