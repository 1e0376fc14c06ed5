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

// Physical and economic primitives: data centers, bus pricing, grid supply
// and the host power model.
//
// Units: power in kW, prices in $/kWh, one slot is one hour so that
// price * power is dollars per slot.

#ifndef GRIDCOAL_MODEL_HPP
#define GRIDCOAL_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace gridcoal {

/// One cloud provider's data center.
struct DataCenterSpec {
  int id = 0;             ///< provider index, 0-based
  int bus = 0;            ///< power bus index, 0-based
  std::int64_t hosts = 0;
  std::int64_t vms_per_host = 1;
  double pue = 1.0;
  double p_idle = 0.0;    ///< kW per host
  double p_peak = 0.0;    ///< kW per host
  double revenue_rate = 0.0;  ///< $ per VM per slot

  /// VM capacity, always hosts * vms_per_host.
  std::int64_t capacity() const noexcept { return hosts * vms_per_host; }

  /// Power drawn with every host fully utilized.
  double peak_power() const noexcept {
    return static_cast<double>(hosts) * p_peak * pue;
  }

  /// Throws ValidationError on hard violations. A PUE outside the usual
  /// [1.1, 3] range is appended to `warnings` instead of rejected.
  void validate(std::vector<std::string>* warnings = nullptr) const;
};

/// Tiered price function of one bus for one slot:
/// price = beta * (power - billing_ref) + base_price.
struct BusPricing {
  double beta = 0.0;
  double base_price = 0.0;
  double billing_ref = 0.0;  ///< kW, set by the grid
  double price_lo = 0.0;
  double price_hi = 0.0;

  void validate() const;
};

struct GridSpec {
  std::vector<std::vector<double>> supply;  ///< [slot][bus] kW available
  double alpha1 = 0.3;
  double alpha2 = 0.7;
  /// Mismatch normalizer; negative means "derive per slot" (see k_norm_for).
  double k_norm = -1.0;

  void validate() const;

  /// K: the configured value, or the price cap when unset.
  double k_norm_for(double price_hi) const noexcept;
};

struct PowerDraw {
  std::int64_t active_hosts = 0;
  double utilization = 0.0;
  double power = 0.0;  ///< kW
};

/// Unclamped tiered price at the given draw. Enforcing the price band is the
/// grid policy's job.
double electricity_price(const BusPricing& pricing, double power_kw) noexcept;

/// Draw of a data center serving `assigned_vms`, packed onto the fewest hosts.
/// Throws CapacityExceededError when assigned_vms > capacity or negative.
PowerDraw power_draw(const DataCenterSpec& spec, std::int64_t assigned_vms);

/// price(power) * power for the draw of `assigned_vms`.
double energy_cost(const DataCenterSpec& spec, const BusPricing& pricing,
                   std::int64_t assigned_vms);

}  // namespace gridcoal

#endif  // GRIDCOAL_MODEL_HPP
