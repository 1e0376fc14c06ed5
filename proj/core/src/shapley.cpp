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

#include "gridcoal/shapley.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "gridcoal/errors.hpp"

namespace gridcoal {

double PayoffVector::of(int player) const {
  auto it = std::find(players.begin(), players.end(), player);
  if (it == players.end()) {
    throw DomainError("player " + std::to_string(player + 1) +
                      " is not in the coalition");
  }
  return payoff[static_cast<std::size_t>(it - players.begin())];
}

double PayoffVector::total() const {
  return std::accumulate(payoff.begin(), payoff.end(), 0.0);
}

PayoffVector shapley_values(Coalition members, const ValueOracle& value) {
  const int s = members.size();
  if (s == 0) throw DomainError("coalitions must be non-empty");
  if (s > kMaxPlayers) {
    throw DomainError("exact Shapley values are limited to " +
                      std::to_string(kMaxPlayers) + " players");
  }
  PayoffVector out;
  out.players = members.members();
  out.payoff.assign(out.players.size(), 0.0);

  // Value of every sub-coalition, indexed by a local bitmask over `players`.
  const std::size_t subsets = std::size_t{1} << s;
  std::vector<double> v(subsets, 0.0);
  for (std::size_t local = 1; local < subsets; ++local) {
    std::uint32_t global = 0;
    for (int b = 0; b < s; ++b) {
      if ((local >> b) & 1u) global |= 1u << out.players[static_cast<std::size_t>(b)];
    }
    v[local] = value(Coalition(global));
  }

  // weight[f] = f! (s - f - 1)! / s!
  std::array<double, kMaxPlayers + 1> fact{};
  fact[0] = 1.0;
  for (int i = 1; i <= kMaxPlayers; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i - 1)] * i;
  std::vector<double> weight(static_cast<std::size_t>(s));
  for (int f = 0; f < s; ++f) {
    weight[static_cast<std::size_t>(f)] =
        fact[static_cast<std::size_t>(f)] * fact[static_cast<std::size_t>(s - f - 1)] /
        fact[static_cast<std::size_t>(s)];
  }

  for (int j = 0; j < s; ++j) {
    const std::size_t bit = std::size_t{1} << j;
    double psi = 0.0;
    for (std::size_t f = 0; f < subsets; ++f) {
      if (f & bit) continue;
      psi += weight[static_cast<std::size_t>(std::popcount(f))] * (v[f | bit] - v[f]);
    }
    out.payoff[static_cast<std::size_t>(j)] = psi;
  }
  return out;
}

}  // namespace gridcoal
