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

#include <string>
#include <vector>

#include "cpa/automaton.hpp"
#include "cpa/debruijn.hpp"
#include "cpa/error.hpp"
#include "cpa/log.hpp"
#include "cpa/reference.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpa;

namespace {

// Random extendable density on the automaton's interior.
DeBruijnDensity random_interior(Rng& rng, const Automaton& a, double keep = 0.5) {
  const PatternGeometry geom(a.pattern_window(), a.interior());
  return beta_W(testing::random_density(rng, geom.combined(), a.base(), keep), geom);
}

struct QuietWarnings {
  WarningSink previous = set_warning_sink({});
  ~QuietWarnings() { set_warning_sink(previous); }
};

}  // namespace

TEST_SUITE("automaton") {
  TEST_CASE("index sets") {
    QuietWarnings quiet;
    const auto f = testing::delta_table(testing::unit_partition(2), {-1, 2}, {-1, 1});
    const Automaton a(12, f, BoundarySpec::deterministic({0}, {0, 0}));
    CHECK(a.i_left() == 3);
    CHECK(a.i_right() == 9);
    CHECK(a.k_left() == Interval{1, 1});
    CHECK(a.k_right() == Interval{11, 12});
    CHECK(a.covered() == Interval{2, 10});
    CHECK(a.truncated_neighborhood(3).interval() == Interval{0, 2});
    CHECK(a.truncated_neighborhood(5).interval() == Interval{-1, 2});
    CHECK(a.truncated_neighborhood(9).interval() == Interval{-1, 0});
    CHECK_THROWS_AS(Automaton(5, f, BoundarySpec::deterministic({0}, {0, 0})), InvalidArgument);
  }

  TEST_CASE("small grids raise a warning") {
    std::vector<std::string> seen;
    auto previous = set_warning_sink([&](const std::string& m) { seen.push_back(m); });
    const auto f = testing::delta_table(testing::unit_partition(2), {-1, 0}, {0, 1});
    const Automaton small(5, f, BoundarySpec::deterministic({0}, {}));
    const Automaton large(6, f, BoundarySpec::deterministic({0}, {}));
    set_warning_sink(previous);
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].find("m = 5") != std::string::npos);
  }

  TEST_CASE("V = {0} step matches the site-wise product formula") {
    Rng rng(1);
    const auto part = testing::unit_partition(3);
    for (int t = 0; t < 20; ++t) {
      const auto f = testing::random_table(rng, part, {-1, 1}, {0, 0});
      const Automaton a(6, f, BoundarySpec::deterministic({2}, {1}));
      const auto g = random_interior(rng, a);
      const auto next = a.step(g);
      CHECK(max_l1_distance(next, testing::product_step(a, g, {2}, {1})) < 1e-12);
    }
  }

  TEST_CASE("single interior site reproduces the global sum") {
    Rng rng(2);
    const auto part = testing::unit_partition(2);
    const Interval u{-1, 0}, v{-1, 2};
    const auto f = testing::random_table(rng, part, u, v);
    QuietWarnings quiet;
    // m = 5: I~ = {3}, K_l = {1}.
    const Automaton a(5, f, BoundarySpec::deterministic({1}, {}));
    REQUIRE(a.interior() == Interval{3, 3});
    const auto g = random_interior(rng, a);
    const auto next = a.step(g);
    std::vector<double> expect(16, 0.0);
    for (const auto& e : g.at(3)) {
      // Global preimage over {1..5}: rho_l = 1 on site 1, pattern on {2..5}.
      const PatternCode phi = 1 * 16 + e.code;
      for (const auto& img : f->row(phi)) expect[img.image] += e.weight * img.probability;
    }
    for (PatternCode c = 0; c < 16; ++c) CHECK(next.at(3).weight(c) == doctest::Approx(expect[c]).epsilon(1e-12));
  }

  TEST_CASE("delta local function leaves the state unchanged") {
    Rng rng(3);
    const auto f = testing::delta_table(testing::unit_partition(3), {0, 0}, {-1, 1});
    const Automaton a(7, f, BoundarySpec::deterministic({}, {}));
    for (int t = 0; t < 10; ++t) {
      const auto g = random_interior(rng, a);
      CHECK(max_l1_distance(a.step(g), g) < 1e-12);
    }
  }

  TEST_CASE("sparse step agrees with the dense reference") {
    Rng rng(4);
    const auto part = testing::unit_partition(2);
    for (int t = 0; t < 20; ++t) {
      const auto f = testing::random_table(rng, part, {-1, 1}, {0, 1});
      const auto noise_l = testing::random_density(rng, {1, 1}, 2, 1.0);
      const auto noise_r = testing::random_density(rng, {7, 7}, 2, 1.0);
      const Automaton a(7, f, BoundarySpec::white_noise(noise_l, noise_r));
      const auto g = random_interior(rng, a);
      CHECK(max_l1_distance(a.step(g), reference::step_dense(a, g, a.boundary())) < 1e-12);
      const auto det = BoundarySpec::deterministic({1}, {0});
      CHECK(max_l1_distance(a.step(g, det), reference::step_dense(a, g, det)) < 1e-12);
    }
  }

  TEST_CASE("step does not depend on the worker count") {
    Rng rng(5);
    const auto f = testing::random_table(rng, testing::unit_partition(3), {-1, 0}, {-1, 1});
    const Automaton a(9, f, BoundarySpec::deterministic({2}, {}));
    const auto g = random_interior(rng, a);
    CHECK(a.step(g, {1}) == a.step(g, {4}));
  }

  TEST_CASE("evolution keeps densities normalized and extendable") {
    Rng rng(6);
    const auto f = testing::random_table(rng, testing::unit_partition(3), {-1, 0}, {0, 1});
    const Automaton a(8, f, BoundarySpec::deterministic({0}, {}));
    const auto g = random_interior(rng, a);
    const auto t = a.evolve(g, 6, 0.01);
    REQUIRE(t.states.size() == 7);
    REQUIRE(t.stats.size() == 6);
    for (const auto& s : t.states) {
      CHECK(s.is_normalized());
      CHECK(is_extendable(s));
    }
    for (const auto& st : t.stats) {
      CHECK(st.min_retained_mass > 0.0);
      CHECK(st.min_retained_mass <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("zero steps returns the initial density") {
    Rng rng(7);
    const auto f = testing::random_table(rng, testing::unit_partition(2), {-1, 0}, {0, 0});
    const Automaton a(4, f, BoundarySpec::deterministic({0}, {}));
    const auto g = random_interior(rng, a);
    const auto t = a.evolve(g, 0, 0.0);
    REQUIRE(t.states.size() == 1);
    CHECK(t.states[0] == g);
    CHECK(t.stats.empty());
  }

  TEST_CASE("localization roundtrip") {
    Rng rng(8);
    const auto f = testing::delta_table(testing::unit_partition(2), {-1, 1}, {-1, 0});
    const Automaton a(7, f, BoundarySpec::deterministic({1}, {0}));
    const auto g = random_interior(rng, a);
    const auto global = a.hat_alpha(g);
    CHECK(global.window() == Interval{1, 7});
    CHECK(global.is_normalized());
    CHECK(l1_distance(marginal(global, {1, 1}), SparseDensity::point_mass({1, 1}, 2, 1)) < 1e-12);
    const auto parts = a.hat_beta(global);
    CHECK(max_l1_distance(parts.interior, g) < 1e-12);
    const auto off_slice = SparseDensity::point_mass({1, 7}, 2, 0);
    CHECK_THROWS_AS(a.hat_beta(off_slice), InvalidArgument);
  }

  TEST_CASE("point states and site marginals") {
    const auto f = testing::delta_table(testing::unit_partition(4), {-1, 0}, {0, 1});
    const Automaton a(6, f, BoundarySpec::deterministic({3}, {}));
    const std::vector<Symbol> state{3, 0, 1, 2, 3, 2};
    const auto g = a.point_state(state);
    const auto m = a.site_marginals(g);
    REQUIRE(m.size() == 6);
    for (std::size_t k = 0; k < 6; ++k) CHECK(m[k] == SparseDensity::point_mass({0, 0}, 4, state[k]));
    CHECK(max_l1_distance(a.step(g), g) < 1e-15);
  }

  TEST_CASE("mass on an unexplored preimage is reported") {
    const auto part = testing::unit_partition(2);
    LocalFunctionBuilder b(part, {-1, 0}, {0, 0}, {});
    b.add_hits(0, 0);
    const auto f = std::make_shared<const LocalFunction>(std::move(b).finish());
    const Automaton a(3, f, BoundarySpec::deterministic({0}, {}));
    const auto g = a.point_state({0, 1, 0});
    try {
      a.step(g);
      FAIL("expected UnexploredPreimage");
    } catch (const UnexploredPreimage& e) {
      CHECK(e.code() == 1);
      CHECK(std::string(e.what()).find("site 2") != std::string::npos);
    }
    CHECK_THROWS_AS(reference::step_dense(a, g, a.boundary()), UnexploredPreimage);
  }

  TEST_CASE("boundary specifications are validated") {
    const auto f = testing::delta_table(testing::unit_partition(2), {-1, 0}, {0, 0});
    CHECK_THROWS_AS(Automaton(4, f, BoundarySpec::deterministic({}, {})), InvalidArgument);
    const auto wrong = SparseDensity::point_mass({2, 2}, 2, 0);
    CHECK_THROWS_AS(Automaton(4, f, BoundarySpec::white_noise(wrong, SparseDensity({5, 4}, 2))), InvalidArgument);
  }
}
