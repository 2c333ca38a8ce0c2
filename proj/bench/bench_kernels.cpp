/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Parallel kernels against their serial references.
//
//   cpa_bench [--workers N]
//
// Each line reports the mean wall time per call and the largest deviation
// between the compared implementations.

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cpa/automaton.hpp"
#include "cpa/debruijn.hpp"
#include "cpa/log.hpp"
#include "cpa/models.hpp"
#include "cpa/random.hpp"
#include "cpa/reference.hpp"
#include "cpa/translator.hpp"
#include "support.hpp"

using namespace cpa;

namespace {

// Mean seconds per call; repeats until at least `budget` seconds have passed.
template <class F>
double time_per_call(F&& f, double budget = 0.5) {
  using Clock = std::chrono::steady_clock;
  std::size_t calls = 0;
  const auto start = Clock::now();
  double elapsed = 0.0;
  do {
    f();
    ++calls;
    elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  } while (elapsed < budget);
  return elapsed / static_cast<double>(calls);
}

void report(const std::string& what, double reference, double fast, double deviation) {
  std::printf("%-44s reference %10.3g s  fast %10.3g s  speedup %6.1fx  max deviation %.3g\n", what.c_str(),
              reference, fast, reference / fast, deviation);
}

void bench_step(int workers) {
  Rng rng(1);
  const auto f = testing::random_table(rng, testing::unit_partition(4), {-1, 1}, {0, 1});
  const Automaton a(10, f, BoundarySpec::deterministic({1}, {2}));
  const PatternGeometry geom(a.pattern_window(), a.interior());
  const auto g = beta_W(testing::random_density(rng, geom.combined(), 4, 0.01), geom);
  const double dev = max_l1_distance(a.step(g, {workers}), reference::step_dense(a, g, a.boundary()));
  const double dense = time_per_call([&] { reference::step_dense(a, g, a.boundary()); });
  const double serial = time_per_call([&] { a.step(g, {1}); });
  const double parallel = time_per_call([&] { a.step(g, {workers}); });
  report("automaton step, dense vs sparse serial", dense, serial, dev);
  report("automaton step, sparse serial vs parallel", serial, parallel, 0.0);
}

void bench_alpha(int w_sites, double keep) {
  Rng rng(2);
  const PatternGeometry geom({0, 1}, {0, w_sites - 1});
  const auto b = beta_W(testing::random_density(rng, geom.combined(), 4, keep), geom);
  const double dev = l1_distance(alpha_W(b), reference::alpha_dense(b));
  const double dense = time_per_call([&] { reference::alpha_dense(b); });
  const double sparse = time_per_call([&] { alpha_W(b); });
  report("alpha_W, dense vs sparse, |W| = " + std::to_string(w_sites), dense, sparse, dev);
}

void bench_light_cone() {
  const ArsenateFlow flow;
  Rng rng(3);
  std::vector<std::vector<double>> windows(64);
  for (auto& w : windows) {
    w = {uniform01(rng), 100.0 * uniform01(rng), uniform01(rng), 100.0 * uniform01(rng)};
  }
  double dev = 0.0;
  std::vector<double> a(2), b(2);
  for (const auto& w : windows) {
    flow.step(w, a);
    flow.step_full_grid(w, b);
    dev = std::max({dev, std::abs(a[0] - b[0]), std::abs(a[1] - b[1])});
  }
  std::size_t k = 0;
  const double full = time_per_call([&] { flow.step_full_grid(windows[k++ % windows.size()], b); });
  k = 0;
  const double cone = time_per_call([&] { flow.step(windows[k++ % windows.size()], a); });
  report("arsenate step, full grid vs light cone", full, cone, dev);
}

void bench_estimate(int workers) {
  const auto part = testing::unit_partition(6);
  const AveragingFlow h;
  const auto plan = SamplingPlan::product({4});
  const auto serial_table = estimate_f0(h, part, {-1, 1}, plan, 7, {1});
  const auto parallel_table = estimate_f0(h, part, {-1, 1}, plan, 7, {workers});
  const double serial = time_per_call([&] { estimate_f0(h, part, {-1, 1}, plan, 7, {1}); });
  const double parallel = time_per_call([&] { estimate_f0(h, part, {-1, 1}, plan, 7, {workers}); });
  report("estimate_f0, 1 vs " + std::to_string(workers) + " workers", serial, parallel,
         serial_table == parallel_table ? 0.0 : 1.0);
}

}  // namespace

int main(int argc, char** argv) {
  int workers = omp_get_max_threads();
  for (int k = 1; k + 1 < argc; ++k) {
    if (std::string(argv[k]) == "--workers") workers = std::stoi(argv[k + 1]);
  }
  set_warning_sink({});
  std::setvbuf(stdout, nullptr, _IOLBF, 0);
  std::printf("workers: %d\n", workers);
  bench_step(workers);
  bench_alpha(6, 0.01);
  bench_alpha(8, 0.0005);
  bench_light_cone();
  bench_estimate(workers);
  return 0;
}
