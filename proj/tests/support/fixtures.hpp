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

// Small hand-sized markets for tests.

#ifndef GRIDCOAL_TESTS_FIXTURES_HPP
#define GRIDCOAL_TESTS_FIXTURES_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "gridcoal/allocation.hpp"
#include "gridcoal/model.hpp"
#include "gridcoal/policy.hpp"

namespace gridcoal::fixture {

/// Owns everything a MarketView points into.
struct Market {
  std::vector<DataCenterSpec> specs;
  std::vector<std::int64_t> workloads;
  std::vector<BusPricing> pricing;
  MigrationCostMatrix migration;

  MarketView view() const { return {specs, workloads, pricing, &migration}; }
};

inline DataCenterSpec spec(int id, std::int64_t hosts, std::int64_t a, double pue,
                           double p_idle, double p_peak, double rate = 0.10) {
  DataCenterSpec s;
  s.id = id;
  s.bus = id;
  s.hosts = hosts;
  s.vms_per_host = a;
  s.pue = pue;
  s.p_idle = p_idle;
  s.p_peak = p_peak;
  s.revenue_rate = rate;
  return s;
}

/// Random instance with small integer-ish inputs. `max_vms` caps the total
/// workload; capacities always cover it.
inline Market random_market(std::size_t n, std::int64_t max_vms, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> hosts(1, 4), per_host(1, 3);
  std::uniform_real_distribution<double> idle(0.05, 0.5), extra(0.05, 0.7),
      pue(1.1, 1.9), beta(0.0005, 0.02), base(0.08, 0.25), ref(0.0, 4.0),
      mig(0.0, 0.05);
  Market m;
  for (std::size_t i = 0; i < n; ++i) {
    const double pi = idle(rng);
    m.specs.push_back(spec(static_cast<int>(i), hosts(rng), per_host(rng), pue(rng),
                           pi, pi + extra(rng)));
    m.pricing.push_back({beta(rng), base(rng), ref(rng), 0.08, 0.25});
  }
  std::int64_t cap = 0;
  for (const auto& s : m.specs) cap += s.capacity();
  const std::int64_t budget = std::min(cap, max_vms);
  // Spread a random total over members, respecting each capacity.
  std::uniform_int_distribution<std::int64_t> total_d(0, budget);
  std::int64_t left = total_d(rng);
  m.workloads.assign(n, 0);
  for (std::size_t i = 0; i < n && left > 0; ++i) {
    std::uniform_int_distribution<std::int64_t> w(0, std::min(left, m.specs[i].capacity()));
    m.workloads[i] = (i + 1 == n) ? std::min(left, m.specs[i].capacity()) : w(rng);
    left -= m.workloads[i];
  }
  m.migration = MigrationCostMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m.migration.at(i, j) = mig(rng);
    }
  }
  return m;
}

/// A complete slot for `n` providers with the paper6 server power curves.
inline SlotInputs small_slot(std::size_t n, std::int64_t hosts = 40,
                             double load = 0.5) {
  static const double kIdle[] = {0.086, 0.143, 0.490};
  static const double kPeak[] = {0.274, 0.518, 1.117};
  static const double kPue[] = {1.3, 1.5, 1.3, 1.6, 1.8, 1.1};
  SlotInputs in;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t t = i % 3;
    in.specs.push_back(spec(static_cast<int>(i), hosts + static_cast<std::int64_t>(7 * i),
                            static_cast<std::int64_t>(t + 1), kPue[i % 6],
                            kIdle[t], kPeak[t]));
    const auto cap = in.specs.back().capacity();
    in.workloads.push_back(static_cast<std::int64_t>(load * static_cast<double>(cap)) +
                           static_cast<std::int64_t>(i));
    in.supply.push_back(0.7 * in.specs.back().peak_power());
    in.beta.push_back(0.5 * (0.25 - 0.08) / in.supply.back());
    in.base_price.push_back(0.10 + 0.02 * static_cast<double>(i));
  }
  in.k_norm = 0.25;
  in.migration = MigrationCostMatrix::uniform(n, 0.007);
  return in;
}

}  // namespace gridcoal::fixture

#endif  // GRIDCOAL_TESTS_FIXTURES_HPP
