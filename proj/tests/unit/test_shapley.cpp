// Copyright 2026 The gridcoal Authors
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

#include <map>
#include <random>

#include "doctest.h"
#include "gridcoal/errors.hpp"
#include "gridcoal/shapley.hpp"
#include "support/oracles.hpp"

using namespace gridcoal;

namespace {

// A random game on the masks of `n` players, with v(empty) = 0.
std::map<std::uint32_t, double> random_game(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> v(-50, 100);
  std::map<std::uint32_t, double> g;
  for (std::uint32_t m = 1; m < (1u << n); ++m) g[m] = v(rng);
  return g;
}

}  // namespace

TEST_CASE("two-player split of the surplus") {
  // v1 = 4, v2 = 6, v12 = 14: each gets its own value plus half of 4.
  const ValueOracle v = [](Coalition c) {
    switch (c.mask()) {
      case 1: return 4.0;
      case 2: return 6.0;
      default: return 14.0;
    }
  };
  const auto psi = shapley_values(Coalition::of({0, 1}), v);
  CHECK(psi.of(0) == doctest::Approx(6.0));
  CHECK(psi.of(1) == doctest::Approx(8.0));
  CHECK(psi.total() == doctest::Approx(14.0));
  CHECK_THROWS_AS(psi.of(2), DomainError);
}

TEST_CASE("symmetric players split evenly") {
  const ValueOracle sq = [](Coalition c) { return double(c.size() * c.size()); };
  const auto psi = shapley_values(Coalition::all(3), sq);
  for (int i = 0; i < 3; ++i) CHECK(psi.of(i) == doctest::Approx(3.0));
  const auto one = shapley_values(Coalition::of({4}), sq);
  CHECK(one.players == std::vector<int>{4});
  CHECK(one.of(4) == 1.0);
}

TEST_CASE("agreement with the permutation oracle and the axioms") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 4;
    const auto g = random_game(n, rng);
    const ValueOracle v = [&](Coalition c) { return g.at(c.mask()); };
    const auto s = Coalition::all(n);
    const auto psi = shapley_values(s, v);
    const auto ref = oracle::permutation_shapley(s, v);
    for (int i = 0; i < n; ++i) CHECK(psi.payoff[i] == doctest::Approx(ref[i]).epsilon(1e-12));
    CHECK(std::abs(psi.total() - v(s)) <= 1e-9);
  }
}

TEST_CASE("dummy players get their standalone value and games add up") {
  std::mt19937_64 rng(23);
  auto g = random_game(3, rng);
  const auto h = random_game(3, rng);
  // Player 4 (index 3) adds exactly 7 to anything.
  std::map<std::uint32_t, double> with_dummy = g;
  with_dummy[8] = 7.0;
  for (std::uint32_t m = 1; m < 8; ++m) with_dummy[m | 8] = g[m] + 7.0;
  const auto psi = shapley_values(Coalition::all(4), [&](Coalition c) { return with_dummy.at(c.mask()); });
  CHECK(psi.of(3) == doctest::Approx(7.0));

  const auto s = Coalition::all(3);
  const auto pg = shapley_values(s, [&](Coalition c) { return g.at(c.mask()); });
  const auto ph = shapley_values(s, [&](Coalition c) { return h.at(c.mask()); });
  const auto sum = shapley_values(s, [&](Coalition c) { return g.at(c.mask()) + h.at(c.mask()); });
  for (int i = 0; i < 3; ++i) CHECK(sum.of(i) == doctest::Approx(pg.of(i) + ph.of(i)));
}

TEST_CASE("payoffs depend on members only, not on ids") {
  const ValueOracle v = [](Coalition c) { return c.contains(5) ? 10.0 * c.size() : 1.0 * c.size(); };
  const auto psi = shapley_values(Coalition::of({2, 5}), v);
  CHECK(psi.total() == doctest::Approx(20.0));
  CHECK(psi.of(5) > psi.of(2));
}

TEST_CASE("guard rails") {
  const ValueOracle v = [](Coalition) { return 0.0; };
  CHECK_THROWS_AS(shapley_values(Coalition{}, v), DomainError);
  CHECK_THROWS_AS(shapley_values(Coalition::all(20), v), DomainError);
}
