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

// Synthetic workload traces.

#ifndef GRIDCOAL_TRACE_HPP
#define GRIDCOAL_TRACE_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace gridcoal {

/// Splits round(fraction * sum(capacity)) VMs across providers with a
/// capacity-weighted Dirichlet draw, then moves any overflow above a
/// provider's capacity to providers with headroom. Sums are exact.
/// A non-positive concentration means the deterministic proportional split.
std::vector<std::int64_t> split_workload(std::span<const std::int64_t> capacity,
                                         double fraction, double concentration,
                                         std::mt19937_64& rng);

/// One split per profile entry: result[slot][provider].
std::vector<std::vector<std::int64_t>> generate_trace(
    std::span<const std::int64_t> capacity, std::span<const double> profile,
    double concentration, std::mt19937_64& rng);

}  // namespace gridcoal

#endif  // GRIDCOAL_TRACE_HPP
