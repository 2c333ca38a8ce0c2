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
#include <vector>

#include "cpa/error.hpp"
#include "cpa/log.hpp"
#include "cpa/oracle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpa;

namespace {

double gaussian(double x) { return std::exp(-0.5 * (x - 0.5) * (x - 0.5) / (0.15 * 0.15)); }

// Cell masses of the Gaussian by a plain midpoint rule, normalized.
std::vector<double> midpoint_masses(std::size_t cells, std::size_t points) {
  std::vector<double> out(cells, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double x = (static_cast<double>(k) + 0.5) / static_cast<double>(points);
    const double w = gaussian(x);
    out[std::min(cells - 1, static_cast<std::size_t>(x * static_cast<double>(cells)))] += w;
    total += w;
  }
  for (double& v : out) v /= total;
  return out;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("identity flow gives the identity transfer matrix") {
    const auto part = testing::unit_partition(3);
    const auto pb = build_PB(IdentityFlow(1), part, 3, SamplingPlan::product({2}), 5);
    REQUIRE(pb.table().preimage_count() == 27);
    for (PatternCode chi = 0; chi < 27; ++chi) {
      CHECK(pb.row(chi) == SparseDensity::point_mass({1, 3}, 3, chi));
      CHECK(pb.samples(chi) == 8);
      CHECK(pb.hits(chi, chi) == 8);
    }
  }

  TEST_CASE("transfer rows coincide with local rows at the maximal pattern window") {
    const auto part = testing::unit_partition(3);
    const AveragingFlow h;
    const auto plan = SamplingPlan::product({4});
    const auto f0 = estimate_f0(h, part, {0, 1}, plan, 21);
    const auto pb = build_PB(h, part, 3, plan, 21);
    for (PatternCode chi = 0; chi < 27; ++chi) {
      double sum = 0.0;
      for (const auto& e : pb.row(chi)) {
        sum += e.weight;
        // The last site is a boundary site and keeps its symbol.
        CHECK(e.code % 3 == chi % 3);
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
      for (const auto& img : f0.row(chi)) {
        CHECK(pb.row(chi).weight(img.image * 3 + chi % 3) == img.probability);
      }
    }
  }

  TEST_CASE("transfer application") {
    const auto part = testing::unit_partition(2);
    const AveragingFlow h;
    const auto pb = build_PB(h, part, 2, SamplingPlan::product({5}), 2);
    const auto e3 = SparseDensity::point_mass({1, 2}, 2, 3);
    CHECK(apply_PB(pb, e3) == pb.row(3));
    const auto mix = SparseDensity::from_entries({1, 2}, 2, {{0, 0.25}, {3, 0.75}});
    const auto out = apply_PB(pb, mix);
    for (PatternCode c = 0; c < 4; ++c) {
      CHECK(out.weight(c) == doctest::Approx(0.25 * pb.row(0).weight(c) + 0.75 * pb.row(3).weight(c)));
    }
    CHECK_THROWS_AS(apply_PB(pb, SparseDensity::point_mass({1, 3}, 2, 0)), InvalidArgument);
  }

  TEST_CASE("restriction of piecewise constant densities is exact and idempotent") {
    const auto part = testing::locality_partition();
    const PointDensity step = [](std::span<const double> x) { return x[0] < 0.31 ? 2.0 : (x[0] < 0.7 ? 0.5 : 1.0); };
    const auto r = restrict_density(*part, 1, step);
    CHECK(r.converged);
    const double total = 2.0 * 0.31 + 0.5 * 0.39 + 1.0 * 0.3;
    CHECK(r.density.weight(0) == doctest::Approx(2.0 * 0.183 / total).epsilon(1e-12));
    CHECK(r.density.weight(3) == doctest::Approx(0.5 * 0.3 / total).epsilon(1e-12));
    // Embed the restriction as a piecewise constant density and restrict again.
    const PointDensity embedded = [&](std::span<const double> x) {
      const Symbol s = part->encode(x);
      return r.density.weight(s) / part->cell_volume(s);
    };
    const auto rr = restrict_density(*part, 1, embedded);
    CHECK(l1_distance(rr.density, r.density) < 1e-12);
  }

  TEST_CASE("uniform density restricts to cell volumes") {
    const auto part = Partition::uniform(Box({0.0, 0.0}, {1.0, 100.0}), {2, 3});
    const auto r = restrict_density(part, 2, [](std::span<const double>) { return 1.0; });
    CHECK(r.density.window() == Interval{1, 2});
    for (PatternCode c = 0; c < 36; ++c) CHECK(r.density.weight(c) == doctest::Approx(1.0 / 36.0).epsilon(1e-12));
  }

  TEST_CASE("product densities restrict to products") {
    const auto part = testing::unit_partition(3);
    const auto r = restrict_density(*part, 2, [](std::span<const double> x) { return gaussian(x[0]) * (1.0 + x[1]); });
    const auto g1 = restrict_density(*part, 1, [](std::span<const double> x) { return gaussian(x[0]); }).density;
    const auto g2 = restrict_density(*part, 1, [](std::span<const double> x) { return 1.0 + x[0]; }).density;
    for (PatternCode c = 0; c < 9; ++c) {
      CHECK(r.density.weight(c) == doctest::Approx(g1.weight(c / 3) * g2.weight(c % 3)).epsilon(1e-10));
    }
  }

  TEST_CASE("Gaussian restriction matches a fine midpoint rule") {
    const auto part = testing::unit_partition(5);
    const auto r = restrict_density(*part, 1, [](std::span<const double> x) { return gaussian(x[0]); });
    CHECK(r.converged);
    const auto oracle = midpoint_masses(5, 1'000'000);
    for (Symbol s = 0; s < 5; ++s) CHECK(std::abs(r.density.weight(s) - oracle[s]) < 1e-3);
  }

  TEST_CASE("negative densities are rejected") {
    const auto part = testing::unit_partition(2);
    CHECK_THROWS_AS(restrict_density(*part, 1, [](std::span<const double> x) { return x[0] - 0.6; }), InvalidArgument);
  }

  TEST_CASE("sample restriction converges to the cell masses") {
    const auto part = testing::unit_partition(4);
    const auto d = restrict_samples(*part, 1, [](Rng& rng, std::span<double> v) { v[0] = uniform01(rng); }, 40000, 3);
    for (Symbol s = 0; s < 4; ++s) CHECK(std::abs(d.weight(s) - 0.25) < 3.0 * std::sqrt(0.25 * 0.75 / 40000.0));
  }

  TEST_CASE("restriction error of a linear density") {
    // g(x) = 2x on N equal cells: the L1 distance to the cell averages is 1/(2N).
    for (std::size_t n : {1u, 2u, 4u}) {
      const auto part = testing::unit_partition(n);
      const double e = restriction_l1_error(*part, [](std::span<const double> x) { return 2.0 * x[0]; });
      CHECK(e == doctest::Approx(0.5 / static_cast<double>(n)).epsilon(1e-10));
    }
    const auto part = testing::locality_partition();
    CHECK(restriction_l1_error(*part, [](std::span<const double>) { return 1.0; }) < 1e-14);
  }

  TEST_CASE("box densities weight cells by overlap") {
    const auto part = testing::unit_partition(5);
    const auto d = box_density(*part, Box({0.1}, {0.5}));
    CHECK(d.weight(0) == doctest::Approx(0.25));
    CHECK(d.weight(1) == doctest::Approx(0.5));
    CHECK(d.weight(2) == doctest::Approx(0.25));
    CHECK(d.size() == 3);
    const auto grid = Partition::uniform(Box({0.0, 80.0}, {1.0, 100.0}), {2, 2});
    const auto q = box_density(grid, Box({0.25, 80.0}, {0.75, 85.0}));
    CHECK(q.weight(0) == doctest::Approx(0.5));
    CHECK(q.weight(2) == doctest::Approx(0.5));
    CHECK_THROWS_AS(box_density(*part, Box({2.0}, {3.0})), InvalidArgument);
  }

  TEST_CASE("Monte Carlo reference") {
    const auto part = testing::unit_partition(4);
    const std::vector<double> start{0.1, 0.6, 0.9};
    const StateSampler initial = [&](Rng&, std::span<double> v) { std::copy(start.begin(), start.end(), v.begin()); };
    const BoundarySampler keep = [](std::size_t, Rng&, std::span<double>) {};
    McOptions opt;
    opt.runs = 50;
    opt.steps = 3;
    const auto series = mc_reference(IdentityFlow(1), 3, initial, keep, {part}, opt);
    REQUIRE(series.size() == 1);
    for (std::size_t k = 0; k <= 3; ++k) {
      CHECK(series[0].at(k, 1) == SparseDensity::point_mass({0, 0}, 4, 0));
      CHECK(series[0].at(k, 2) == SparseDensity::point_mass({0, 0}, 4, 2));
      CHECK(series[0].at(k, 3) == SparseDensity::point_mass({0, 0}, 4, 3));
    }
  }

  TEST_CASE("Monte Carlo reference is reproducible across worker counts") {
    const auto part = testing::unit_partition(5);
    const StateSampler initial = [](Rng& rng, std::span<double> v) {
      for (double& x : v) x = uniform01(rng);
    };
    const BoundarySampler noise = [](std::size_t, Rng& rng, std::span<double> v) { v[0] = uniform01(rng); };
    McOptions opt;
    opt.runs = 200;
    opt.steps = 4;
    opt.seed = 9;
    opt.workers = 1;
    const auto a = mc_reference(AveragingFlow(2.0), 4, initial, noise, {part}, opt);
    opt.workers = 3;
    const auto b = mc_reference(AveragingFlow(2.0), 4, initial, noise, {part}, opt);
    CHECK(a[0].values == b[0].values);
    for (std::size_t k = 0; k <= 4; ++k) {
      for (int site = 1; site <= 4; ++site) CHECK(a[0].at(k, site).is_normalized());
    }
  }
}
