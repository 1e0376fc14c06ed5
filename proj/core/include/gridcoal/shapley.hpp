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

#ifndef GRIDCOAL_SHAPLEY_HPP
#define GRIDCOAL_SHAPLEY_HPP

#include <functional>
#include <vector>

#include "gridcoal/partition.hpp"

namespace gridcoal {

/// Shapley division of one coalition's value, in ascending member order.
struct PayoffVector {
  std::vector<int> players;
  std::vector<double> payoff;

  double of(int player) const;
  double total() const;
};

using ValueOracle = std::function<double(Coalition)>;

/// Exact Shapley value by subset enumeration (2^|S| oracle calls, the empty
/// coalition is worth 0 and is never queried). Throws DomainError when the
/// coalition is empty or larger than kMaxPlayers.
PayoffVector shapley_values(Coalition members, const ValueOracle& value);

}  // namespace gridcoal

#endif  // GRIDCOAL_SHAPLEY_HPP
