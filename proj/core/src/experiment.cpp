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

#include "gridcoal/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "gridcoal/errors.hpp"

namespace gridcoal {

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::kIcg: return "ICG";
    case Scheme::kCent: return "CENT";
    case Scheme::kNoCoop: return "NoCoop";
  }
  return "?";
}

Scheme parse_scheme(const std::string& name) {
  std::string s;
  for (char c : name) {
    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (s == "icg") return Scheme::kIcg;
  if (s == "cent") return Scheme::kCent;
  if (s == "nocoop") return Scheme::kNoCoop;
  throw ValidationError("schemes", "unknown scheme '" + name + "'");
}

std::vector<Scheme> parse_schemes(const std::string& list) {
  std::vector<Scheme> out;
  std::istringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const Scheme s = parse_scheme(item);
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  }
  if (out.empty()) throw ValidationError("schemes", "no scheme selected");
  std::sort(out.begin(), out.end());
  return out;
}

SlotError::SlotError(std::size_t slot, Scheme scheme, const std::string& what)
    : std::runtime_error("slot " + std::to_string(slot) + ", " +
                         to_string(scheme) + ": " + what),
      slot_(slot),
      scheme_(scheme) {}

const SlotRecord& RunReport::at(std::size_t slot, Scheme scheme) const {
  for (const auto& r : records) {
    if (r.slot == slot && r.scheme == scheme) return r;
  }
  throw DomainError("no record for slot " + std::to_string(slot) + " / " +
                    to_string(scheme));
}

bool RunReport::has(Scheme scheme) const {
  return std::find(schemes.begin(), schemes.end(), scheme) != schemes.end();
}

double RunReport::mean_sg(Scheme scheme) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.scheme != scheme) continue;
    sum += r.sg_profit;
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

double RunReport::mean_cp_total(Scheme scheme) const {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.scheme != scheme) continue;
    sum += std::accumulate(r.cp_profit.begin(), r.cp_profit.end(), 0.0);
    ++count;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

SlotInputs make_slot_inputs(const Scenario& sc, std::size_t slot) {
  if (slot >= sc.horizon) {
    throw DomainError("slot " + std::to_string(slot) + " outside the horizon");
  }
  SlotInputs in;
  in.slot = slot;
  in.specs = sc.providers;
  in.workloads = sc.workload[slot];
  for (const auto& bus : sc.pricing[slot]) {
    in.beta.push_back(bus.beta);
    in.base_price.push_back(bus.base_price);
  }
  in.supply = sc.grid.supply[slot];
  in.price_lo = sc.pricing[slot].front().price_lo;
  in.price_hi = sc.pricing[slot].front().price_hi;
  in.alpha1 = sc.grid.alpha1;
  in.alpha2 = sc.grid.alpha2;
  in.k_norm = sc.grid.k_norm_for(in.price_hi);
  in.migration = sc.migration;
  in.dynamics = sc.dynamics;
  in.allocation = sc.allocation;
  return in;
}

ActionGrid make_action_grid(const Scenario& sc, const SlotInputs& in) {
  const auto reference = in.standalone_power();
  return sc.cartesian_actions
             ? ActionGrid::cartesian(reference, sc.action_factors)
             : ActionGrid::scaled(reference, sc.action_factors);
}

SlotGame make_slot_game(const Scenario& sc, std::size_t slot,
                        std::shared_ptr<const StateSpace> space) {
  SlotInputs in = make_slot_inputs(sc, slot);
  ActionGrid grid = make_action_grid(sc, in);
  return SlotGame(std::move(in), std::move(grid), std::move(space));
}

namespace {

// Fallback states below this stationary mass are numerically unreachable.
constexpr double kMaterialMass = 1e-6;

SlotRecord from_outcome(std::size_t slot, Scheme scheme, std::size_t state,
                        std::size_t action, const PairOutcome& o) {
  SlotRecord r;
  r.slot = slot;
  r.scheme = scheme;
  r.sg_profit = o.utility.total;
  r.revenue_term = o.utility.revenue_term;
  r.mismatch_term = o.utility.mismatch_term;
  r.cp_profit = o.payoffs;
  r.prices = o.prices;
  r.partitions = {{state, 1.0}};
  r.action = action;
  r.served = o.served;
  return r;
}

SlotRecord run_scheme(SlotGame& game, Scheme scheme) {
  const std::size_t slot = game.inputs().slot;
  switch (scheme) {
    case Scheme::kIcg: {
      const IcgResult res = icg_solve(game);
      SlotRecord r;
      r.slot = slot;
      r.scheme = scheme;
      r.sg_profit = res.averages.sg;
      r.revenue_term = res.averages.revenue_term;
      r.mismatch_term = res.averages.mismatch_term;
      r.cp_profit = res.averages.cp;
      r.prices = res.policy.expected_prices;
      const auto& p = res.policy.stationary.p;
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] > 0.0) r.partitions.emplace_back(k, p[k]);
      }
      // The most likely action in the most likely state.
      const std::size_t top = static_cast<std::size_t>(
          std::max_element(p.begin(), p.end()) - p.begin());
      const std::size_t A = game.num_actions();
      for (std::size_t a = 1; a < A; ++a) {
        if (res.policy.action_prob(top, a, A) >
            res.policy.action_prob(top, r.action, A)) {
          r.action = a;
        }
      }
      r.served = game.outcome(top, r.action).served;
      for (std::size_t k = 0; k < p.size(); ++k) {
        if (p[k] > kMaterialMass && res.policy.fallback[k]) r.flagged = true;
      }
      return r;
    }
    case Scheme::kCent: {
      const CentResult res = cent_solve(game);
      return from_outcome(slot, scheme, res.state, res.action, res.outcome);
    }
    case Scheme::kNoCoop: {
      const NoCoopResult res = nocoop_solve(game);
      SlotRecord r = from_outcome(slot, scheme, game.space().singletons_id(),
                                  res.action, res.outcome);
      r.flagged = !res.price_feasible;
      return r;
    }
  }
  throw DomainError("unknown scheme");
}

}  // namespace

RunReport run_experiment(const Scenario& sc, const std::vector<Scheme>& schemes,
                         const ExperimentOptions& options) {
  RunReport report;
  report.scenario = sc.name;
  report.horizon = sc.horizon;
  report.num_providers = sc.num_providers();
  report.schemes = schemes;
  std::sort(report.schemes.begin(), report.schemes.end());
  report.schemes.erase(std::unique(report.schemes.begin(), report.schemes.end()),
                       report.schemes.end());

  auto space = std::make_shared<const StateSpace>(static_cast<int>(sc.num_providers()));
  for (std::size_t k = 0; k < space->size(); ++k) {
    report.partition_labels.push_back(space->state(k).to_string());
  }

  std::vector<std::size_t> slots = options.slots;
  if (slots.empty()) {
    slots.resize(sc.horizon);
    std::iota(slots.begin(), slots.end(), std::size_t{0});
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());

  std::vector<std::vector<SlotRecord>> results(slots.size());
  std::vector<std::exception_ptr> errors(slots.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < slots.size(); i = next++) {
      Scheme current = report.schemes.front();
      try {
        SlotGame game = make_slot_game(sc, slots[i], space);
        for (Scheme s : report.schemes) {
          current = s;
          results[i].push_back(run_scheme(game, s));
        }
      } catch (const std::exception& e) {
        errors[i] = std::make_exception_ptr(SlotError(slots[i], current, e.what()));
      }
    }
  };
  unsigned threads = options.threads ? options.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, slots.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (auto& slot_records : results) {
    for (auto& r : slot_records) report.records.push_back(std::move(r));
  }
  return report;
}

}  // namespace gridcoal
