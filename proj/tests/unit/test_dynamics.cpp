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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gridcoal/dynamics.hpp"
#include "gridcoal/errors.hpp"

using namespace gridcoal;

namespace {

// Additive game with a per-coalition bonus; payoff = own weight + equal
// share of the bonus.
struct RandomGame {
  std::vector<double> weight;
  std::vector<double> bonus;  // by mask

  RandomGame(int n, std::mt19937_64& rng) : weight(n), bonus(1u << n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& w : weight) w = u(rng);
    for (double& b : bonus) b = u(rng);
  }
  double payoff(Coalition c, int i) const {
    return weight[i] + (c.size() > 1 ? bonus[c.mask()] / c.size() : 0.0);
  }
  PayoffTable table(const StateSpace& space) const {
    PayoffTable t(space.size(), std::vector<double>(weight.size()));
    for (std::size_t k = 0; k < space.size(); ++k) {
      for (std::size_t i = 0; i < weight.size(); ++i) {
        t[k][i] = payoff(space.state(k).block_of(static_cast<int>(i)), static_cast<int>(i));
      }
    }
    return t;
  }
};

}  // namespace

TEST_CASE("best reply follows the weak inequality") {
  const Move m{MoveKind::kMerge, Partition::singletons(2), Partition::grand(2), Coalition::all(2)};
  const DynamicsParams p;
  const std::vector<double> before{1.0, 1.0};
  CHECK(best_reply_prob(0, m, before, std::vector<double>{2.0, 1.0}, p) == 0.99);
  CHECK(best_reply_prob(1, m, before, std::vector<double>{2.0, 1.0}, p) == 0.99);
  CHECK(best_reply_prob(0, m, before, std::vector<double>{0.5, 1.0}, p) == 0.01);
  const Move other{MoveKind::kMerge, Partition::singletons(3),
                   Partition::from_labels({0, 0, 1}), Coalition::of({0, 1})};
  CHECK_THROWS_AS(best_reply_prob(2, other, std::vector<double>(3, 0.0),
                                  std::vector<double>(3, 0.0), p),
                  DomainError);
}

TEST_CASE("transition probability multiplies actors and bystanders") {
  const DynamicsParams p;
  const Move two{MoveKind::kMerge, Partition::singletons(2), Partition::grand(2), Coalition::all(2)};
  CHECK(transition_prob(two, p, std::vector<double>{0, 0}, std::vector<double>{1, 1}) ==
        doctest::Approx(0.245025).epsilon(1e-14));
  const Move three{MoveKind::kMerge, Partition::singletons(3),
                   Partition::from_labels({0, 0, 1}), Coalition::of({0, 1})};
  CHECK(transition_prob(three, p, std::vector<double>{0, 0, 0}, std::vector<double>{1, 1, 0}) ==
        doctest::Approx(0.1225125).epsilon(1e-14));
  const Move stay{MoveKind::kMerge, Partition::singletons(2), Partition::singletons(2),
                  Coalition::all(2)};
  CHECK(transition_prob(stay, p, std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 0.0);
}

TEST_CASE("tiny chains in closed form") {
  const DynamicsParams p;
  const auto t1 = build_transition_matrix(StateSpace(1), {{0.0}}, p);
  REQUIRE(t1.size() == 1);
  CHECK(t1(0, 0) == 1.0);

  const StateSpace two(2);
  const auto t2 = build_transition_matrix(two, {{1.0, 1.0}, {0.0, 0.0}}, p);
  const std::size_t s = two.singletons_id(), g = two.grand_id();
  CHECK(t2(s, g) == doctest::Approx(0.245025));
  CHECK(t2(s, s) == doctest::Approx(1.0 - 0.245025));
  CHECK(t2(g, s) == doctest::Approx(0.5 * 0.01 * 0.5 * 0.01));
}

TEST_CASE("rows sum to one and unreachable pairs are zero") {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 5; ++n) {
    const StateSpace space(n);
    const RandomGame game(n, rng);
    for (double eps : {0.0, 0.01, 0.3}) {
      const auto t = build_transition_matrix(space, game.table(space), {0.5, 0.99, eps});
      CHECK(t.max_row_error() <= 1e-12);
      for (std::size_t k = 0; k < space.size(); ++k) {
        std::vector<bool> adjacent(space.size(), false);
        for (const auto& e : space.edges(k)) adjacent[e.to] = true;
        for (std::size_t j = 0; j < space.size(); ++j) {
          if (j != k && !adjacent[j]) CHECK(t(k, j) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("too much outflow is reported") {
  const StateSpace space(3);
  // Everybody gains by leaving the grand coalition, and all act at once.
  PayoffTable gain(space.size(), std::vector<double>(3, 1.0));
  gain[space.grand_id()].assign(3, 0.0);
  CHECK_THROWS_AS(build_transition_matrix(space, gain, {1.0, 1.0, 0.0}), NumericError);
}

TEST_CASE("a move nobody strictly gains from is not a best reply") {
  const DynamicsParams p;
  const Move two{MoveKind::kMerge, Partition::singletons(2), Partition::grand(2), Coalition::all(2)};
  const std::vector<double> same{3.0, 4.0};
  // Each actor alone is indifferent, so the per-actor rule says rho...
  CHECK(best_reply_prob(0, two, same, same, p) == 0.99);
  // ...but staying is just as good, so the move only happens irrationally.
  CHECK(transition_prob(two, p, same, same) == doctest::Approx(0.005 * 0.005));
  // One strict gain is enough to make indifferent partners comply.
  CHECK(transition_prob(two, p, same, std::vector<double>{3.5, 4.0}) ==
        doctest::Approx(0.245025));

  const StateSpace space(2);
  const PayoffTable flat(2, std::vector<double>(2, 1.0));
  const auto t = build_transition_matrix(space, flat, {0.5, 0.99, 0.0});
  CHECK(absorbing_states(t).size() == 2);
  const auto stable = merge_split_stable(space, [](Coalition, int) { return 1.0; });
  CHECK(stable[0]);
  CHECK(stable[1]);
}

TEST_CASE("stationary distributions of hand-solved chains") {
  const auto t = TransitionMatrix::from_rows({{0.9, 0.1}, {0.5, 0.5}});
  const auto p = stationary_distribution(t);
  CHECK(std::abs(p.p[0] - 5.0 / 6.0) <= 1e-12);
  CHECK(std::abs(p.p[1] - 1.0 / 6.0) <= 1e-12);
  CHECK(p.unichain);

  const auto id = stationary_distribution(TransitionMatrix::identity(4));
  CHECK_FALSE(id.unichain);
  for (double x : id.p) CHECK(x == doctest::Approx(0.25));

  const auto two_sinks = TransitionMatrix::from_rows({{1, 0, 0}, {0.3, 0.4, 0.3}, {0, 0, 1}});
  const auto q = stationary_distribution(two_sinks);
  CHECK(q.p[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(q.p[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.p[2] == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(stationary_distribution(TransitionMatrix::from_rows({{0.5, 0.2}, {0, 1}})),
                  DomainError);
}

TEST_CASE("random chains meet the stationary tolerances") {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 5; ++n) {
    const StateSpace space(n);
    const RandomGame game(n, rng);
    for (double eps : {0.0, 0.01}) {
      const auto t = build_transition_matrix(space, game.table(space), {0.5, 0.99, eps});
      const auto p = stationary_distribution(t);
      double sum = 0.0;
      for (double x : p.p) {
        CHECK(x >= 0.0);
        sum += x;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      CHECK(p.residual <= 1e-10);
    }
  }
}

TEST_CASE("absorbing states and ergodic sets") {
  CHECK(absorbing_states(TransitionMatrix::identity(3)).size() == 3);
  const auto sink = TransitionMatrix::from_rows({{0.7, 0.3}, {0.0, 1.0}});
  CHECK(absorbing_states(sink) == std::vector<std::size_t>{1});
  CHECK(ergodic_sets(sink) == std::vector<std::vector<std::size_t>>{{1}});
  const auto mixed =
      TransitionMatrix::from_rows({{0.5, 0.25, 0.25}, {0.1, 0.8, 0.1}, {0.2, 0.2, 0.6}});
  CHECK(absorbing_states(mixed).empty());
  CHECK(ergodic_sets(mixed) == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
}

TEST_CASE("without irrational moves, absorbing means merge/split stable") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 4;
    const StateSpace space(n);
    const RandomGame game(n, rng);
    const auto t = build_transition_matrix(space, game.table(space), {0.5, 0.99, 0.0});
    const auto stable =
        merge_split_stable(space, [&](Coalition c, int i) { return game.payoff(c, i); });
    const auto absorbing = absorbing_states(t);
    for (std::size_t k = 0; k < space.size(); ++k) {
      const bool is_abs = std::binary_search(absorbing.begin(), absorbing.end(), k);
      CHECK(is_abs == stable[k]);
    }
  }
}

TEST_CASE("raising epsilon lifts every payoff-decreasing move") {
  std::mt19937_64 rng(12);
  const StateSpace space(4);
  const RandomGame game(4, rng);
  const auto table = game.table(space);
  const auto lo = build_transition_matrix(space, table, {0.5, 0.99, 0.0});
  const auto hi = build_transition_matrix(space, table, {0.5, 0.99, 0.05});
  for (std::size_t k = 0; k < space.size(); ++k) {
    for (const auto& e : space.edges(k)) {
      if (lo(k, e.to) == 0.0) CHECK(hi(k, e.to) > 0.0);
      else CHECK(hi(k, e.to) >= lo(k, e.to));
    }
  }
}

TEST_CASE("parameters and csv output") {
  CHECK_THROWS_AS((DynamicsParams{0.0, 0.99, 0.01}.validate()), ValidationError);
  CHECK_THROWS_AS((DynamicsParams{0.5, 0.5, 0.5}.validate()), ValidationError);
  std::ostringstream out;
  TransitionMatrix::identity(2).write_csv(out, {"a", "b"});
  CHECK(out.str().find("a") != std::string::npos);
}
