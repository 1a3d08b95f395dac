// tools/bench_kernels.cpp
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
// Times the OpenMP kernels against their serial reference twins on
// paper-parity shapes and verifies the outputs agree bit for bit while at it.

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "auscult/frontend/cosgauss.hpp"
#include "auscult/frontend/reference.hpp"
#include "auscult/frontend/relevance.hpp"
#include "auscult/numerics/matrix.hpp"
#include "auscult/numerics/rng.hpp"

namespace {

using auscult::Matrix;

double time_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_s, double parallel_s, bool bitwise) {
  std::printf("%-22s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_s * 1e3,
              parallel_s * 1e3, serial_s / parallel_s, bitwise ? "bitwise match" : "MISMATCH");
}

}  // namespace

int main() {
  const int frame_len = 1102, t_count = 51, n_filters = 64, kernel_len = 353;
  const int rel_hidden = 50, rel_context = 51;

  auscult::Rng rng(7);
  Matrix frames(frame_len, t_count);
  for (std::size_t i = 0; i < frames.size(); ++i) frames.at_flat(i) = rng.normal();

  auscult::GaussKernelBank bank;
  bank.kernel_len = kernel_len;
  bank.mu = auscult::init_centers_mel(n_filters, 44100);

  Matrix upstream(n_filters, t_count);
  for (std::size_t i = 0; i < upstream.size(); ++i) upstream.at_flat(i) = rng.normal();

  auscult::RelevanceNet net = auscult::RelevanceNet::init(rel_hidden, rel_context, rng);
  Matrix feats(n_filters, t_count);
  for (std::size_t i = 0; i < feats.size(); ++i) feats.at_flat(i) = rng.normal();

  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("shapes: frames %dx%d, %d kernels of %d taps, relevance %d hidden / %d context\n",
              frame_len, t_count, n_filters, kernel_len, rel_hidden, rel_context);
  std::printf("threads: %d\n\n", threads);
  std::printf("%-22s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

  const int reps = 3;

  {
    auscult::FilterbankActs ref, par;
    const double ts = time_best_of(reps, [&] { ref = auscult::reference::filterbank_forward(frames, bank); });
    const double tp = time_best_of(reps, [&] { par = auscult::filterbank_forward(frames, bank); });
    const bool ok = auscult::max_abs_diff(ref.output, par.output) == 0.0;
    report("filterbank forward", ts, tp, ok);

    auscult::FilterbankGrads gref, gpar;
    const double gs = time_best_of(
        reps, [&] { gref = auscult::reference::filterbank_backward(upstream, frames, bank, ref); });
    const double gp = time_best_of(
        reps, [&] { gpar = auscult::filterbank_backward(upstream, frames, bank, par); });
    bool gok = auscult::max_abs_diff(gref.frames, gpar.frames) == 0.0;
    for (int f = 0; f < n_filters; ++f) gok = gok && gref.mu[f] == gpar.mu[f];
    report("filterbank backward", gs, gp, gok);
  }

  {
    auscult::RelevanceActs ref, par;
    const double ts = time_best_of(reps, [&] { ref = auscult::reference::relevance_forward(feats, net); });
    const double tp = time_best_of(reps, [&] { par = auscult::relevance_forward(feats, net); });
    const bool ok = auscult::max_abs_diff(ref.weighted, par.weighted) == 0.0;
    report("relevance forward", ts, tp, ok);

    auscult::RelevanceGrads gref, gpar;
    const double gs = time_best_of(
        reps, [&] { gref = auscult::reference::relevance_backward(upstream, feats, net, ref); });
    const double gp =
        time_best_of(reps, [&] { gpar = auscult::relevance_backward(upstream, feats, net, par); });
    const bool gok = auscult::max_abs_diff(gref.x, gpar.x) == 0.0 &&
                     auscult::max_abs_diff(gref.w1, gpar.w1) == 0.0;
    report("relevance backward", gs, gp, gok);
  }

  return 0;
}
