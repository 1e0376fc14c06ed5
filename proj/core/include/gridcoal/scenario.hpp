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

// Scenario files and the built-in "paper6" preset.

#ifndef GRIDCOAL_SCENARIO_HPP
#define GRIDCOAL_SCENARIO_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridcoal/allocation.hpp"
#include "gridcoal/dynamics.hpp"
#include "gridcoal/model.hpp"

namespace gridcoal {

/// How per-slot workload is produced.
struct TraceConfig {
  std::vector<double> profile;  ///< total demand as a fraction of capacity, per slot
  double concentration = 50.0;  ///< Dirichlet concentration of the split
};

struct Scenario {
  std::string name;
  std::vector<DataCenterSpec> providers;
  /// [slot][bus]; billing_ref is left at zero and set by the grid's action.
  std::vector<std::vector<BusPricing>> pricing;
  GridSpec grid;
  MigrationCostMatrix migration;
  DynamicsParams dynamics;
  TraceConfig trace;
  std::size_t horizon = 24;
  std::vector<std::vector<std::int64_t>> workload;  ///< [slot][provider]
  std::uint64_t seed = 0;

  std::vector<double> action_factors{0.6, 0.8, 1.0, 1.2};
  bool cartesian_actions = false;
  AllocationOptions allocation;

  std::vector<std::string> warnings;

  std::size_t num_providers() const noexcept { return providers.size(); }
  /// Throws ValidationError naming the offending field; soft issues are
  /// appended to `warnings`.
  void validate(std::vector<std::string>* warnings = nullptr) const;
};

/// Diurnal load curve: minimum `lo` at 04:00 and maximum `hi` at 16:00.
std::vector<double> diurnal_profile(std::size_t slots = 24, double lo = 0.3,
                                    double hi = 0.8);

/// Loads an INI-style scenario file, or a built-in preset by name
/// ("paper6"). `seed` replaces the file's seed before any random inputs are
/// drawn. Throws ParseError (with line) or ValidationError (with field).
Scenario load_scenario(const std::string& path_or_name,
                       std::optional<std::uint64_t> seed = std::nullopt);

/// Same as load_scenario but from in-memory text.
Scenario parse_scenario(const std::string& text,
                        std::optional<std::uint64_t> seed = std::nullopt);

/// Text of the built-in preset, usable as a template for custom files.
const std::string& builtin_scenario_text(const std::string& name);

}  // namespace gridcoal

#endif  // GRIDCOAL_SCENARIO_HPP
