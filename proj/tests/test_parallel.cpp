#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <sstream>
#include <string>
#include <vector>

#include "auscult/frontend/cosgauss.hpp"
#include "auscult/frontend/framing.hpp"
#include "auscult/frontend/mel.hpp"
#include "auscult/frontend/reference.hpp"
#include "auscult/frontend/relevance.hpp"
#include "auscult/fusion/fuse.hpp"
#include "auscult/fusion/score_table.hpp"
#include "auscult/numerics/rng.hpp"
#include "testutil.hpp"

using namespace auscult;

// Every OpenMP loop in the library distributes disjoint output slots across
// threads, so results must match the serial reference implementations bit for
// bit at ANY thread count.  Seven threads on however few cores the runner has
// also exercises oversubscription.

namespace {

struct ThreadCount {
#ifdef _OPENMP
  explicit ThreadCount(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~ThreadCount() { omp_set_num_threads(saved); }
  int saved;
#else
  explicit ThreadCount(int) {}
#endif
};

Matrix random_frames(Rng& rng, int frame_len, int t) {
  Matrix frames(frame_len, t);
  testutil::fill_uniform(frames, rng, -0.8, 0.8);
  return frames;
}

bool same_acts(const FilterbankActs& a, const FilterbankActs& b) {
  return testutil::bitwise_equal(a.output, b.output) &&
         testutil::bitwise_equal(a.pooled, b.pooled) && a.valid_len == b.valid_len;
}

}  // namespace

TEST_CASE("filterbank forward/backward match the serial reference bitwise") {
  Rng rng(31);
  GaussKernelBank bank;
  bank.kernel_len = 33;
  bank.mu = init_centers_mel(12, 8000);
  const Matrix frames = random_frames(rng, 128, 6);

  for (int threads : {1, 2, 7}) {
    ThreadCount tc(threads);
    const FilterbankActs par = filterbank_forward(frames, bank);
    const FilterbankActs ser = reference::filterbank_forward(frames, bank);
    CHECK(same_acts(par, ser));

    Matrix upstream(par.output.rows(), par.output.cols());
    testutil::fill_uniform(upstream, rng, -1.0, 1.0);
    const FilterbankGrads gp = filterbank_backward(upstream, frames, bank, par);
    const FilterbankGrads gs = reference::filterbank_backward(upstream, frames, bank, ser);
    CHECK(testutil::bitwise_equal(gp.mu, gs.mu));
    CHECK(testutil::bitwise_equal(gp.frames, gs.frames));
  }
}

TEST_CASE("relevance forward/backward match the serial reference bitwise") {
  Rng rng(32);
  RelevanceNet net = RelevanceNet::init(8, 5, rng);
  Matrix x(10, 9);
  testutil::fill_uniform(x, rng, -2.0, 2.0);

  for (int threads : {1, 2, 7}) {
    ThreadCount tc(threads);
    const RelevanceActs par = relevance_forward(x, net);
    const RelevanceActs ser = reference::relevance_forward(x, net);
    CHECK(testutil::bitwise_equal(par.mask, ser.mask));
    CHECK(testutil::bitwise_equal(par.weighted, ser.weighted));
    CHECK(testutil::bitwise_equal(par.hidden_act, ser.hidden_act));

    Matrix upstream(x.rows(), x.cols());
    testutil::fill_uniform(upstream, rng, -1.0, 1.0);
    const RelevanceGrads gp = relevance_backward(upstream, x, net, par);
    const RelevanceGrads gs = reference::relevance_backward(upstream, x, net, ser);
    CHECK(testutil::bitwise_equal(gp.w1, gs.w1));
    CHECK(testutil::bitwise_equal(gp.b1, gs.b1));
    CHECK(testutil::bitwise_equal(gp.w2, gs.w2));
    CHECK(testutil::bitwise_equal(gp.b2, gs.b2));
    CHECK(testutil::bitwise_equal(gp.x, gs.x));
  }
}

TEST_CASE("mel frontend is invariant to the thread count") {
  Rng rng(33);
  Waveform w;
  w.sample_rate = 8000;
  for (int i = 0; i < 4000; ++i) w.samples.push_back(rng.uniform(-0.5, 0.5));

  TimeFreqRepr single, many;
  {
    ThreadCount tc(1);
    single = mel_frontend(w, 10, 256, 128);
  }
  {
    ThreadCount tc(7);
    many = mel_frontend(w, 10, 256, 128);
  }
  CHECK(single.source == many.source);
  CHECK(testutil::bitwise_equal(single.data, many.data));
}

TEST_CASE("weight search picks identical winners at any thread count") {
  // Two folds, two models of random labeled scores.
  Rng data_rng(34);
  std::vector<std::vector<ScoreTable>> folds;
  for (int f = 0; f < 2; ++f) {
    std::vector<ScoreTable> models;
    for (int m = 0; m < 2; ++m) {
      ScoreTable t;
      t.model_tag = "m" + std::to_string(m);
      for (int i = 0; i < 30; ++i) {
        ScoreRow row;
        row.id = "f" + std::to_string(f) + "_" + std::to_string(i);
        row.label = i % 2;
        row.score = 0.3 * *row.label + data_rng.uniform(-0.5, 0.5);
        t.rows.push_back(row);
      }
      models.push_back(std::move(t));
    }
    folds.push_back(std::move(models));
  }

  std::vector<double> first_weights;
  double first_auc = 0.0;
  std::string first_report;
  for (int threads : {1, 2, 7}) {
    ThreadCount tc(threads);
    std::ostringstream report;
    Rng rng(35);
    const FusionWeights w = search_weights(folds, 0.4, 64, rng, &report);
    if (threads == 1) {
      first_weights = w.a;
      first_auc = w.chosen_auc;
      first_report = report.str();
    } else {
      CHECK(testutil::bitwise_equal(w.a, first_weights));
      CHECK(w.chosen_auc == first_auc);
      CHECK(report.str() == first_report);
    }
  }
}
