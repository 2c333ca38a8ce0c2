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
#include <string>
#include <vector>

#include "cpa/error.hpp"
#include "cpa/log.hpp"
#include "cpa/translator.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpa;

namespace {

// Doubles its input; pushes most of [0, 1] out of the domain.
class DoublingFlow final : public FlowMap {
 public:
  std::string name() const override { return "doubling"; }
  std::size_t dimension() const override { return 1; }
  Interval neighborhood() const override { return {0, 0}; }
  double time_step() const override { return 1.0; }
  void step(std::span<const double> w, std::span<double> out) const override { out[0] = 2.0 * w[0]; }
};

double row_weight(const LocalFunction& f, PatternCode pre, PatternCode img) {
  for (const auto& e : f.row(pre)) {
    if (e.image == img) return e.probability;
  }
  return 0.0;
}

}  // namespace

TEST_SUITE("translator") {
  TEST_CASE("identity flow gives the delta table") {
    const auto part = testing::unit_partition(4);
    const IdentityFlow id(1);
    const auto f0 = estimate_f0(id, part, {-1, 0}, SamplingPlan::product({3}), 11);
    const auto delta = testing::delta_table(part, {0, 0}, {-1, 0});
    REQUIRE(f0.table().preimage_count() == 16);
    CHECK(f0.table() == delta->table());
    CHECK(f0.meta().clamped_values == 0);
    CHECK(f0.meta().image_values == 16 * 9 * 2);
  }

  TEST_CASE("averaging on the interval coding reaches the expected images") {
    const auto part = testing::locality_partition();
    const AveragingFlow h;
    const auto f0 = estimate_f0(h, part, {0, 1}, SamplingPlan::joint(20000), 3);
    CHECK(row_weight(f0, testing::number({4, 4, 2}, 5), testing::number({2, 2}, 5)) > 0.0);
    CHECK(row_weight(f0, testing::number({4, 2, 2}, 5), testing::number({2, 0}, 5)) > 0.0);
    // (0,0,0) maps into [0, 0.0976): always cell 0.
    CHECK(row_weight(f0, 0, 0) == 1.0);
  }

  TEST_CASE("rows are stochastic and every row is explored") {
    const auto part = testing::unit_partition(3);
    const AveragingFlow h;
    const auto f0 = estimate_f0(h, part, {-1, 1}, SamplingPlan::product({2}), 5);
    for (PatternCode c = 0; c < f0.table().preimage_count(); ++c) {
      REQUIRE(f0.explored(c));
      double sum = 0.0;
      for (const auto& e : f0.row(c)) sum += e.probability;
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("estimation is reproducible and independent of the worker count") {
    const auto part = testing::unit_partition(4);
    const AveragingFlow h;
    const auto plan = SamplingPlan::product({2, 3, 2});
    const auto a = estimate_f0(h, part, {-1, 0}, plan, 99, {1});
    const auto b = estimate_f0(h, part, {-1, 0}, plan, 99, {4});
    CHECK(a == b);
    const auto c = estimate_f0(h, part, {-1, 0}, plan, 100, {1});
    CHECK_FALSE(a.table() == c.table());
  }

  TEST_CASE("row estimates agree with quadrature within three sigma") {
    const auto part = testing::unit_partition(5);
    const AveragingFlow h;
    const std::uint64_t n = 20000;
    const auto f0 = estimate_f0(h, part, {0, 0}, SamplingPlan::joint(n), 17);
    // Independent oracle: midpoint rule on a 1000 x 1000 grid in the preimage cell.
    const int grid = 1000;
    for (PatternCode pre : {PatternCode{6}, PatternCode{13}, PatternCode{24}}) {
      const Symbol c0 = static_cast<Symbol>(pre / 5), c1 = static_cast<Symbol>(pre % 5);
      std::vector<double> exact(5, 0.0);
      for (int a = 0; a < grid; ++a) {
        for (int b = 0; b < grid; ++b) {
          const double x0 = 0.2 * (c0 + (a + 0.5) / grid);
          const double x1 = 0.2 * (c1 + (b + 0.5) / grid);
          const int k = std::min(4, static_cast<int>((x0 + x1) / 3.75 / 0.2));
          exact[static_cast<std::size_t>(k)] += 1.0 / (grid * grid);
        }
      }
      for (PatternCode img = 0; img < 5; ++img) {
        const double p = exact[img];
        const double sigma = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
        CHECK(std::abs(row_weight(f0, pre, img) - p) <= 3.0 * sigma + 2e-3);
      }
    }
  }

  TEST_CASE("composition over W = {0} is the identity") {
    Rng rng(4);
    const auto part = testing::unit_partition(3);
    const auto f = testing::random_table(rng, part, {-1, 0}, {0, 1});
    const auto g = compose_f0(*f, {0, 0});
    CHECK(g.table() == f->table());
    CHECK(g.pattern_window() == Interval{0, 1});
  }

  TEST_CASE("composition of the delta table is the delta table") {
    const auto part = testing::unit_partition(3);
    const auto f = testing::delta_table(part, {-1, 0}, {0, 0});
    const auto g = compose_f0(*f, {-1, 1});
    CHECK(g.pattern_window() == Interval{-1, 1});
    CHECK(g.table() == testing::delta_table(part, {-1, 0}, {-1, 1})->table());
  }

  TEST_CASE("composition of a V = {0} table is the product of the site images") {
    Rng rng(12);
    const auto part = testing::unit_partition(3);
    const auto f = testing::random_table(rng, part, {0, 1}, {0, 0});
    const auto g = compose_f0(*f, {0, 1});
    for (PatternCode phi = 0; phi < 27; ++phi) {
      const auto d = testing::digits(phi, 3, 3);
      const PatternCode left = testing::number({d[0], d[1]}, 3);
      const PatternCode right = testing::number({d[1], d[2]}, 3);
      for (PatternCode img = 0; img < 9; ++img) {
        const double expect = row_weight(*f, left, img / 3) * row_weight(*f, right, img % 3);
        CHECK(row_weight(g, phi, img) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("composition checks W") {
    const auto f = testing::delta_table(testing::unit_partition(2), {0, 0}, {0, 0});
    CHECK_THROWS_AS(compose_f0(*f, {1, 2}), InvalidArgument);
  }

  TEST_CASE("clamped images raise a warning") {
    std::vector<std::string> seen;
    auto previous = set_warning_sink([&](const std::string& m) { seen.push_back(m); });
    const DoublingFlow flow;
    const auto f0 = estimate_f0(flow, testing::unit_partition(4), {0, 0}, SamplingPlan::product({10}), 1);
    set_warning_sink(previous);
    REQUIRE(seen.size() == 1);
    CHECK(seen[0].find("clamped") != std::string::npos);
    CHECK(f0.meta().clamp_fraction() == doctest::Approx(0.5));
    CHECK(row_weight(f0, 3, 3) == 1.0);
  }

  TEST_CASE("sampling plans") {
    CHECK(SamplingPlan::product({37, 75}).vectors_per_cell(2) == 37 * 75);
    CHECK(SamplingPlan::product({4}).vectors_per_cell(3) == 64);
    CHECK(SamplingPlan::joint(7).vectors_per_cell(9) == 7);
    CHECK_THROWS_AS(SamplingPlan::product({1, 2}).validate(3), InvalidArgument);
    CHECK_THROWS_AS(SamplingPlan::product({0}).validate(1), InvalidArgument);
    CHECK(to_string(SamplingPlan::product({37, 75})) == "product(37,75)");
    const auto part = testing::unit_partition(2);
    CHECK_THROWS_AS(estimate_f0(ArsenateFlow{}, part, {0, 0}, SamplingPlan::product({1}), 0), InvalidArgument);
  }
}
