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

#include <cmath>
#include <limits>
#include <vector>

#include "cpa/error.hpp"
#include "cpa/models.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpa;

TEST_SUITE("models") {
  TEST_CASE("averaging rule") {
    const AveragingFlow h;
    double out = 0.0;
    const double a[2] = {0.7, 0.8};
    h.step(a, std::span<double>(&out, 1));
    CHECK(out == doctest::Approx(0.4).epsilon(1e-15));
    const double b[2] = {0.8, 0.3625};
    h.step(b, std::span<double>(&out, 1));
    CHECK(out == doctest::Approx(0.31).epsilon(1e-15));
    const double c[2] = {0.0, 0.0};
    h.step(c, std::span<double>(&out, 1));
    CHECK(out == 0.0);
    CHECK_THROWS_AS(AveragingFlow(1.5), InvalidArgument);
  }

  TEST_CASE("global step keeps boundary sites") {
    const AveragingFlow h;
    const std::vector<double> state{0.7, 0.8, 0.3625, 1.0};
    std::vector<double> out(4);
    advance_global(h, state, out);
    CHECK(out[0] == doctest::Approx(0.4));
    CHECK(out[1] == doctest::Approx(0.31));
    CHECK(out[2] == doctest::Approx((0.3625 + 1.0) / 3.75));
    CHECK(out[3] == 1.0);
  }

  TEST_CASE("upwind advection") {
    const LinearAdvectionFlow right(1.0, 1.0, 0.5);
    CHECK(right.neighborhood() == Interval{-1, 0});
    double out = 0.0;
    const double w[2] = {1.0, 0.0};
    right.step(w, std::span<double>(&out, 1));
    CHECK(out == doctest::Approx(0.5));
    const LinearAdvectionFlow full(2.0, 1.0, 0.5);
    full.step(w, std::span<double>(&out, 1));
    CHECK(out == doctest::Approx(1.0));
    const LinearAdvectionFlow left(-1.0, 1.0, 1.0);
    CHECK(left.neighborhood() == Interval{0, 1});
    const double z[2] = {0.0, 1.0};
    left.step(z, std::span<double>(&out, 1));
    CHECK(out == doctest::Approx(1.0));
    CHECK_THROWS_AS(LinearAdvectionFlow(2.0, 1.0, 1.0), InvalidArgument);
  }

  TEST_CASE("arsenate equilibrium is a fixed point of the reaction") {
    const ArsenateParams p;
    const double d = 0.5;
    const double a = p.s_max * d / (d + p.k_eq);
    CHECK(std::abs(arsenate_rate(p, d, a)) < 1e-12);
    double dd = d, aa = a;
    arsenate_react(p, dd, aa, 10.0);
    CHECK(dd == doctest::Approx(d).epsilon(1e-12));
    CHECK(aa == doctest::Approx(a).epsilon(1e-12));
  }

  TEST_CASE("arsenate reaction conserves total arsenate") {
    for (Integrator integ : {Integrator::Euler, Integrator::Heun, Integrator::RungeKutta4}) {
      ArsenateParams p;
      p.integrator = integ;
      double d = 0.9, a = 10.0;
      const double before = p.r_h * d + a;
      for (int k = 0; k < 100; ++k) arsenate_react(p, d, a, 0.1);
      CHECK(std::abs(p.r_h * d + a - before) < 1e-9);
      CHECK(a > 10.0);
      CHECK(d < 0.9);
    }
  }

  TEST_CASE("uniform equilibrium pipe is stationary") {
    const ArsenateFlow f;
    const double d = 0.6;
    const double a = f.params().s_max * d / (d + f.params().k_eq);
    const double w[4] = {d, a, d, a};
    double out[2];
    f.step(w, out);
    CHECK(out[0] == doctest::Approx(d).epsilon(1e-10));
    CHECK(out[1] == doctest::Approx(a).epsilon(1e-10));
  }

  TEST_CASE("light-cone step matches the full characteristic grid") {
    const ArsenateFlow f;
    Rng rng(31);
    for (int t = 0; t < 25; ++t) {
      const double w[4] = {uniform01(rng), 100.0 * uniform01(rng), uniform01(rng), 100.0 * uniform01(rng)};
      double fast[2], full[2];
      f.step(w, fast);
      f.step_full_grid(w, full);
      CHECK(fast[0] == doctest::Approx(full[0]).epsilon(1e-12));
      CHECK(fast[1] == doctest::Approx(full[1]).epsilon(1e-12));
    }
  }

  TEST_CASE("clean water flushes downstream") {
    const ArsenateFlow f;
    const double w[4] = {0.0, 0.0, 1.0, 50.0};
    double out[2];
    f.step(w, out);
    // The inlet water has travelled exactly one spacing; it picks up desorbed arsenate only.
    CHECK(out[0] >= 0.0);
    CHECK(out[0] < 0.1);
  }

  TEST_CASE("non-finite input is a model instability") {
    const ArsenateFlow f;
    const double w[4] = {std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0, 0.0};
    double out[2];
    CHECK_THROWS_AS(f.step(w, out), ModelInstability);
  }

  TEST_CASE("arsenate parameters must be consistent") {
    ArsenateParams p;
    p.tau = 5.0;
    CHECK_THROWS_AS(ArsenateFlow{p}, InvalidArgument);
    p = {};
    p.dt_fine = 0.3;
    p.dx_fine = 3.0;
    CHECK_THROWS_AS(ArsenateFlow{p}, InvalidArgument);
    p = {};
    p.k1 = -1.0;
    CHECK_THROWS_AS(ArsenateFlow{p}, InvalidArgument);
    CHECK(ArsenateParams{}.substeps() == 100);
  }
}
