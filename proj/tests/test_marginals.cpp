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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cpa/error.hpp"
#include "cpa/marginals.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpa;
namespace fs = std::filesystem;

namespace {

MarginalSeries sample_series(Rng& rng, std::vector<std::size_t> cells) {
  std::size_t e = 1;
  for (auto c : cells) e *= c;
  MarginalSeries s;
  s.cells_per_dim = cells;
  s.steps = {0, 3, 7};
  s.sites = {1, 2, 3};
  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    s.values.emplace_back();
    for (std::size_t j = 0; j < s.sites.size(); ++j) s.values.back().push_back(testing::random_density(rng, {0, 0}, e));
  }
  return s;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "cpa_marginals_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_SUITE("marginals") {
  TEST_CASE("csv roundtrip") {
    Rng rng(1);
    const auto s = sample_series(rng, {3, 4});
    const auto path = scratch("m.csv");
    write_marginals_csv(s, path);
    const auto back = read_marginals_csv(path, {3, 4});
    CHECK(back.steps == s.steps);
    CHECK(back.sites == s.sites);
    for (std::size_t k = 0; k < 3; ++k) {
      for (int site = 1; site <= 3; ++site) CHECK(l1_distance(back.at(s.steps[k], site), s.at(s.steps[k], site)) < 1e-15);
    }
    std::ostringstream text;
    write_marginals_csv(s, text);
    CHECK(text.str().rfind("# cpa-marginals v1\nstep,site,symbol,probability\n", 0) == 0);
  }

  TEST_CASE("comparisons") {
    Rng rng(2);
    const auto s = sample_series(rng, {5});
    const auto self = compare_marginals(s, s);
    CHECK(self.max == 0.0);
    CHECK(self.mean == 0.0);
    CHECK(self.steps == s.steps);

    MarginalSeries a = s, b = s;
    for (auto& row : a.values) {
      for (auto& d : row) d = SparseDensity::point_mass({0, 0}, 5, 0);
    }
    for (auto& row : b.values) {
      for (auto& d : row) d = SparseDensity::point_mass({0, 0}, 5, 4);
    }
    const auto apart = compare_marginals(a, b);
    CHECK(apart.max == 2.0);
    CHECK(apart.mean == 2.0);

    MarginalSeries shifted = s;
    shifted.steps = {3, 8, 9};
    CHECK(compare_marginals(s, shifted).steps == std::vector<std::size_t>{3});
    MarginalSeries other_sites = s;
    other_sites.sites = {2, 3, 4};
    CHECK_THROWS_AS(compare_marginals(s, other_sites), FormatError);
  }

  TEST_CASE("projection onto one state dimension") {
    // Symbols (i, j) on 2 x 3 cells, code 3 i + j.
    const auto d = SparseDensity::from_entries({0, 0}, 6, {{0, 0.1}, {2, 0.2}, {4, 0.3}, {5, 0.4}});
    const auto first = dimension_marginal(d, {2, 3}, 0);
    CHECK(first.base() == 2);
    CHECK(first.weight(0) == doctest::Approx(0.3));
    CHECK(first.weight(1) == doctest::Approx(0.7));
    const auto second = dimension_marginal(d, {2, 3}, 1);
    CHECK(second.weight(0) == doctest::Approx(0.1));
    CHECK(second.weight(1) == doctest::Approx(0.3));
    CHECK(second.weight(2) == doctest::Approx(0.6));
    CHECK_THROWS_AS(dimension_marginal(d, {2, 3}, 2), InvalidArgument);
  }

  TEST_CASE("malformed files") {
    const auto path = scratch("bad.csv");
    {
      std::ofstream out(path);
      out << "step,site,symbol,probability\n0,1,0,1\n";
    }
    CHECK_THROWS_AS(read_marginals_csv(path, {2}), FormatError);
    {
      std::ofstream out(path);
      out << "# cpa-marginals v1\nstep,site,symbol,probability\n0,1,x,1\n";
    }
    CHECK_THROWS_AS(read_marginals_csv(path, {2}), FormatError);
    {
      std::ofstream out(path);
      out << "# cpa-marginals v1\nstep,site,symbol,probability\n0,1,0:1,1\n";
    }
    CHECK_THROWS_AS(read_marginals_csv(path, {2}), FormatError);
    CHECK_THROWS_AS(read_marginals_csv(scratch("missing.csv"), {2}), IoError);
  }
}
