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

#include "gridcoal/model.hpp"

#include <cmath>
#include <sstream>

#include "gridcoal/errors.hpp"

namespace gridcoal {

void DataCenterSpec::validate(std::vector<std::string>* warnings) const {
  const std::string prefix = "providers[" + std::to_string(id) + "].";
  if (hosts <= 0) throw ValidationError(prefix + "hosts", "must be positive");
  if (vms_per_host <= 0) {
    throw ValidationError(prefix + "vms_per_host", "must be positive");
  }
  if (!(p_idle > 0.0)) throw ValidationError(prefix + "p_idle", "must be > 0");
  if (!(p_peak > p_idle)) {
    throw ValidationError(prefix + "p_peak", "must exceed p_idle");
  }
  if (!(pue >= 1.0)) throw ValidationError(prefix + "pue", "must be >= 1");
  if (revenue_rate < 0.0) {
    throw ValidationError(prefix + "revenue_rate", "must be >= 0");
  }
  if (warnings != nullptr && (pue < 1.1 || pue > 3.0)) {
    std::ostringstream msg;
    msg << prefix << "pue " << pue << " outside typical range [1.1, 3]";
    warnings->push_back(msg.str());
  }
}

void BusPricing::validate() const {
  if (!(beta > 0.0)) throw ValidationError("pricing.beta", "must be > 0");
  if (!(price_lo < price_hi)) {
    throw ValidationError("pricing.price_lo", "must be below price_hi");
  }
}

void GridSpec::validate() const {
  if (alpha1 < 0.0 || alpha1 > 1.0) {
    throw ValidationError("grid.alpha1", "must lie in [0, 1]");
  }
  if (alpha2 < 0.0 || alpha2 > 1.0) {
    throw ValidationError("grid.alpha2", "must lie in [0, 1]");
  }
  if (std::abs(alpha1 + alpha2 - 1.0) > 1e-9) {
    throw ValidationError("grid.alpha2", "alpha1 + alpha2 must equal 1");
  }
  for (const auto& row : supply) {
    for (double g : row) {
      if (!(g >= 0.0)) throw ValidationError("grid.supply", "must be >= 0");
    }
  }
}

double GridSpec::k_norm_for(double price_hi) const noexcept {
  return k_norm >= 0.0 ? k_norm : price_hi;
}

double electricity_price(const BusPricing& pricing, double power_kw) noexcept {
  return pricing.beta * (power_kw - pricing.billing_ref) + pricing.base_price;
}

PowerDraw power_draw(const DataCenterSpec& spec, std::int64_t assigned_vms) {
  if (assigned_vms < 0) throw DomainError("negative VM count");
  if (assigned_vms > spec.capacity()) {
    std::ostringstream msg;
    msg << "provider " << spec.id << ": " << assigned_vms
        << " VMs exceed capacity " << spec.capacity();
    throw CapacityExceededError(msg.str());
  }
  PowerDraw draw;
  if (assigned_vms == 0) return draw;
  const std::int64_t a = spec.vms_per_host;
  draw.active_hosts = (assigned_vms + a - 1) / a;
  draw.utilization = static_cast<double>(assigned_vms) /
                     static_cast<double>(draw.active_hosts * a);
  draw.power = static_cast<double>(draw.active_hosts) *
               (spec.p_idle + (spec.p_peak - spec.p_idle) * draw.utilization) *
               spec.pue;
  return draw;
}

double energy_cost(const DataCenterSpec& spec, const BusPricing& pricing,
                   std::int64_t assigned_vms) {
  const double e = power_draw(spec, assigned_vms).power;
  return electricity_price(pricing, e) * e;
}

}  // namespace gridcoal
