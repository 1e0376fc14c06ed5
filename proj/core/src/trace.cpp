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

#include "gridcoal/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridcoal/errors.hpp"

namespace gridcoal {

namespace {

// Largest-remainder rounding of `total * w` with weights summing to one.
std::vector<std::int64_t> apportion(std::int64_t total,
                                    const std::vector<double>& w) {
  const std::size_t n = w.size();
  std::vector<std::int64_t> out(n);
  std::vector<std::pair<double, std::size_t>> rem(n);
  std::int64_t used = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double exact = static_cast<double>(total) * w[i];
    out[i] = static_cast<std::int64_t>(std::floor(exact));
    rem[i] = {exact - static_cast<double>(out[i]), i};
    used += out[i];
  }
  std::stable_sort(rem.begin(), rem.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < total; k = (k + 1) % n, ++used) {
    ++out[rem[k].second];
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> split_workload(std::span<const std::int64_t> capacity,
                                         double fraction, double concentration,
                                         std::mt19937_64& rng) {
  if (capacity.empty()) throw ValidationError("capacity", "no providers");
  if (!(fraction >= 0.0) || fraction > 1.0) {
    throw ValidationError("trace.profile", "load fraction must lie in [0, 1]");
  }
  const std::int64_t total_cap =
      std::accumulate(capacity.begin(), capacity.end(), std::int64_t{0});
  if (total_cap <= 0) throw ValidationError("capacity", "total capacity is zero");
  const auto total =
      static_cast<std::int64_t>(std::llround(fraction * static_cast<double>(total_cap)));

  const std::size_t n = capacity.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = static_cast<double>(capacity[i]) / static_cast<double>(total_cap);
  }
  if (concentration > 0.0) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (w[i] == 0.0) continue;
      std::gamma_distribution<double> g(concentration * w[i], 1.0);
      w[i] = g(rng);
      sum += w[i];
    }
    if (sum > 0.0) {
      for (double& x : w) x /= sum;
    }
  }
  std::vector<std::int64_t> out = apportion(total, w);

  // Overflow goes to the providers with headroom, proportionally to it.
  for (;;) {
    std::int64_t overflow = 0, headroom = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (out[i] > capacity[i]) {
        overflow += out[i] - capacity[i];
        out[i] = capacity[i];
      }
    }
    if (overflow == 0) break;
    std::vector<double> room(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) headroom += capacity[i] - out[i];
    for (std::size_t i = 0; i < n; ++i) {
      room[i] = static_cast<double>(capacity[i] - out[i]) /
                static_cast<double>(headroom);
    }
    const auto extra = apportion(overflow, room);
    for (std::size_t i = 0; i < n; ++i) out[i] += extra[i];
  }
  return out;
}

std::vector<std::vector<std::int64_t>> generate_trace(
    std::span<const std::int64_t> capacity, std::span<const double> profile,
    double concentration, std::mt19937_64& rng) {
  std::vector<std::vector<std::int64_t>> out;
  out.reserve(profile.size());
  for (double f : profile) {
    out.push_back(split_workload(capacity, f, concentration, rng));
  }
  return out;
}

}  // namespace gridcoal
