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

#include "gridcoal/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gridcoal/errors.hpp"

namespace gridcoal {

ActionGrid ActionGrid::scaled(std::span<const double> reference,
                              std::span<const double> factors) {
  if (factors.empty()) throw DomainError("action grid needs at least one factor");
  ActionGrid g;
  for (double f : factors) {
    std::vector<double> delta(reference.begin(), reference.end());
    for (double& d : delta) d *= f;
    g.actions.push_back(std::move(delta));
  }
  return g;
}

ActionGrid ActionGrid::cartesian(std::span<const double> reference,
                                 std::span<const double> factors,
                                 std::size_t max_actions) {
  if (factors.empty()) throw DomainError("action grid needs at least one factor");
  double count = std::pow(static_cast<double>(factors.size()),
                          static_cast<double>(reference.size()));
  if (count > static_cast<double>(max_actions)) {
    std::ostringstream msg;
    msg << "cartesian action grid would have " << count << " actions (cap "
        << max_actions << ")";
    throw DomainError(msg.str());
  }
  ActionGrid g;
  std::vector<std::size_t> digit(reference.size(), 0);
  for (;;) {
    std::vector<double> delta(reference.size());
    for (std::size_t i = 0; i < reference.size(); ++i) {
      delta[i] = reference[i] * factors[digit[i]];
    }
    g.actions.push_back(std::move(delta));
    std::size_t i = reference.size();
    while (i > 0 && ++digit[i - 1] == factors.size()) digit[--i] = 0;
    if (i == 0) break;
  }
  return g;
}

std::vector<double> SlotInputs::standalone_power() const {
  std::vector<double> out(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    out[i] = power_draw(specs[i], workloads[i]).power;
  }
  return out;
}

SgUtility sg_utility(std::span<const double> power,
                     std::span<const double> prices,
                     std::span<const double> supply, double alpha1,
                     double alpha2, double k_norm) {
  double sales = 0.0, mismatch = 0.0;
  for (std::size_t j = 0; j < power.size(); ++j) {
    sales += prices[j] * power[j];
    mismatch += std::abs(power[j] - supply[j]);
  }
  SgUtility u;
  u.revenue_term = alpha1 * sales;
  u.mismatch_term = alpha2 * k_norm * mismatch;
  u.total = u.revenue_term - u.mismatch_term;
  return u;
}

// ---------------------------------------------------------------------------
// SlotGame

SlotGame::SlotGame(SlotInputs inputs, ActionGrid grid,
                   std::shared_ptr<const StateSpace> space)
    : in_(std::move(inputs)), grid_(std::move(grid)), space_(std::move(space)) {
  const std::size_t n = in_.num_providers();
  if (space_ == nullptr || static_cast<std::size_t>(space_->num_players()) != n) {
    throw DomainError("state space does not match the provider count");
  }
  if (in_.workloads.size() != n || in_.beta.size() != n ||
      in_.base_price.size() != n || in_.supply.size() != n ||
      in_.migration.size() != n) {
    throw DomainError("slot inputs have inconsistent provider counts");
  }
  if (grid_.size() == 0) throw DomainError("action grid is empty");
  pricing_.resize(grid_.size());
  for (std::size_t a = 0; a < grid_.size(); ++a) {
    if (grid_.actions[a].size() != n) {
      throw DomainError("action width does not match the provider count");
    }
    for (std::size_t i = 0; i < n; ++i) {
      BusPricing p{in_.beta[i], in_.base_price[i], grid_.actions[a][i],
                   in_.price_lo, in_.price_hi};
      p.validate();
      pricing_[a].push_back(p);
    }
  }
  shapley_.assign(grid_.size(),
                  std::vector<std::optional<PayoffVector>>(std::size_t{1} << n));
  outcomes_.assign(space_->size(),
                   std::vector<std::optional<PairOutcome>>(grid_.size()));
  transitions_.resize(grid_.size());
}

MarketView SlotGame::market(std::size_t action) const {
  return MarketView{in_.specs, in_.workloads, pricing_.at(action), &in_.migration};
}

const CoalitionEvaluation& SlotGame::coalition(Coalition members,
                                               std::size_t action) {
  const MarketView m = market(action);
  return values_.get_or_compute(members, in_.slot, m, [&] {
    return evaluate_coalition(members, m, in_.allocation);
  });
}

const PayoffVector& SlotGame::shapley(Coalition members, std::size_t action) {
  auto& cell = shapley_.at(action).at(members.mask());
  {
    std::lock_guard lock(mutex_);
    if (cell) return *cell;
  }
  PayoffVector psi = shapley_values(
      members, [&](Coalition c) { return coalition(c, action).value; });
  std::lock_guard lock(mutex_);
  if (!cell) cell = std::move(psi);
  return *cell;
}

const PairOutcome& SlotGame::outcome(std::size_t state, std::size_t action) {
  auto& cell = outcomes_.at(state).at(action);
  {
    std::lock_guard lock(mutex_);
    if (cell) return *cell;
  }
  const std::size_t n = num_providers();
  PairOutcome out;
  out.served.assign(n, 0);
  out.power.assign(n, 0.0);
  out.prices.assign(n, 0.0);
  out.payoffs.assign(n, 0.0);
  for (const Coalition block : space_->state(state).blocks()) {
    const Allocation& alloc = coalition(block, action).allocation;
    const PayoffVector& psi = shapley(block, action);
    for (std::size_t p = 0; p < alloc.size(); ++p) {
      const auto id = static_cast<std::size_t>(alloc.members[p]);
      out.served[id] = alloc.column_load(p);
      out.power[id] = alloc.draws[p].power;
      out.payoffs[id] = psi.payoff[p];
    }
  }
  const auto& pricing = pricing_[action];
  for (std::size_t i = 0; i < n; ++i) {
    out.prices[i] = electricity_price(pricing[i], out.power[i]);
    const double slack = 1e-12 * std::max(1.0, std::abs(out.prices[i]));
    if (out.prices[i] < in_.price_lo - slack || out.prices[i] > in_.price_hi + slack) {
      out.prices_in_band = false;
    }
  }
  out.utility = sg_utility(out.power, out.prices, in_.supply, in_.alpha1,
                           in_.alpha2, in_.k_norm);
  std::lock_guard lock(mutex_);
  if (!cell) cell = std::move(out);
  return *cell;
}

PayoffTable SlotGame::payoff_table(std::size_t action) {
  PayoffTable table(num_states());
  for (std::size_t k = 0; k < num_states(); ++k) {
    table[k] = outcome(k, action).payoffs;
  }
  return table;
}

const TransitionMatrix& SlotGame::transition(std::size_t action) {
  auto& cell = transitions_.at(action);
  {
    std::lock_guard lock(mutex_);
    if (cell) return *cell;
  }
  TransitionMatrix t = transition(action, in_.dynamics);
  std::lock_guard lock(mutex_);
  if (!cell) cell = std::move(t);
  return *cell;
}

TransitionMatrix SlotGame::transition(std::size_t action,
                                      const DynamicsParams& params) {
  return build_transition_matrix(*space_, payoff_table(action), params);
}

// ---------------------------------------------------------------------------
// CMDP

CmdpModel CmdpModel::from_game(SlotGame& game) {
  CmdpModel m;
  m.num_states = game.num_states();
  m.num_actions = game.num_actions();
  m.num_providers = game.num_providers();
  m.price_lo = game.inputs().price_lo;
  m.price_hi = game.inputs().price_hi;
  const std::size_t pairs = m.num_states * m.num_actions;
  m.utility.resize(pairs);
  m.revenue_term.resize(pairs);
  m.mismatch_term.resize(pairs);
  m.prices.resize(pairs * m.num_providers);
  m.payoffs.resize(pairs * m.num_providers);
  for (std::size_t k = 0; k < m.num_states; ++k) {
    for (std::size_t a = 0; a < m.num_actions; ++a) {
      const PairOutcome& o = game.outcome(k, a);
      const std::size_t p = m.pair(k, a);
      m.utility[p] = o.utility.total;
      m.revenue_term[p] = o.utility.revenue_term;
      m.mismatch_term[p] = o.utility.mismatch_term;
      std::copy(o.prices.begin(), o.prices.end(),
                m.prices.begin() + static_cast<std::ptrdiff_t>(p * m.num_providers));
      std::copy(o.payoffs.begin(), o.payoffs.end(),
                m.payoffs.begin() + static_cast<std::ptrdiff_t>(p * m.num_providers));
    }
  }
  for (std::size_t a = 0; a < m.num_actions; ++a) {
    m.transitions.push_back(game.transition(a));
  }
  return m;
}

lp::LinearProgram build_cmdp_lp(const CmdpModel& model) {
  const std::size_t S = model.num_states, A = model.num_actions;
  const std::size_t N = model.num_providers;
  if (model.transitions.size() != A) {
    throw DomainError("CMDP model needs one transition matrix per action");
  }
  for (const auto& t : model.transitions) {
    if (t.size() != S) throw DomainError("transition matrix size mismatch");
    if (t.max_row_error() > 1e-9) {
      throw DomainError("transition matrix is not row-stochastic");
    }
  }
  lp::LinearProgram lp(S * A);
  lp.objective = model.utility;

  for (std::size_t i = 0; i < N; ++i) {
    std::vector<double> row(S * A);
    for (std::size_t p = 0; p < S * A; ++p) row[p] = model.prices[p * N + i];
    lp.add_lb(row, model.price_lo);
    lp.add_ub(std::move(row), model.price_hi);
  }
  // Balance: sum_a phi(k', a) = sum_{k, a} phi(k, a) T_a(k, k').
  for (std::size_t target = 0; target + 1 < S; ++target) {
    std::vector<double> row(S * A, 0.0);
    for (std::size_t k = 0; k < S; ++k) {
      for (std::size_t a = 0; a < A; ++a) {
        row[model.pair(k, a)] -= model.transitions[a](k, target);
      }
    }
    for (std::size_t a = 0; a < A; ++a) row[model.pair(target, a)] += 1.0;
    lp.add_eq(std::move(row), 0.0);
  }
  lp.add_eq(std::vector<double>(S * A, 1.0), 1.0);
  return lp;
}

PricingPolicy extract_policy(const lp::Solution& solution,
                             const CmdpModel& model) {
  if (solution.status != lp::Status::kOptimal) {
    throw DomainError("policy extraction needs an optimal LP solution");
  }
  const std::size_t S = model.num_states, A = model.num_actions;
  const std::size_t N = model.num_providers;
  PricingPolicy pol;
  pol.phi = solution.x;
  pol.varphi.assign(S * A, 0.0);
  pol.fallback.assign(S, false);
  for (std::size_t k = 0; k < S; ++k) {
    double mass = 0.0;
    for (std::size_t a = 0; a < A; ++a) mass += pol.phi[model.pair(k, a)];
    if (mass > 0.0) {
      for (std::size_t a = 0; a < A; ++a) {
        pol.varphi[model.pair(k, a)] = pol.phi[model.pair(k, a)] / mass;
      }
      continue;
    }
    pol.fallback[k] = true;
    std::size_t best = 0;
    for (std::size_t a = 1; a < A; ++a) {
      if (model.utility[model.pair(k, a)] > model.utility[model.pair(k, best)]) {
        best = a;
      }
    }
    pol.varphi[model.pair(k, best)] = 1.0;
  }

  pol.induced = TransitionMatrix(S);
  for (std::size_t k = 0; k < S; ++k) {
    for (std::size_t a = 0; a < A; ++a) {
      const double w = pol.varphi[model.pair(k, a)];
      if (w == 0.0) continue;
      const auto row = model.transitions[a].row(k);
      for (std::size_t j = 0; j < S; ++j) pol.induced(k, j) += w * row[j];
    }
  }
  pol.stationary = stationary_distribution(pol.induced);

  pol.expected_prices.assign(N, 0.0);
  for (std::size_t k = 0; k < S; ++k) {
    const double pk = pol.stationary.p[k];
    if (pk == 0.0) continue;
    for (std::size_t a = 0; a < A; ++a) {
      const double w = pk * pol.varphi[model.pair(k, a)];
      if (w == 0.0) continue;
      const std::size_t p = model.pair(k, a);
      pol.expected_utility += w * model.utility[p];
      for (std::size_t i = 0; i < N; ++i) {
        pol.expected_prices[i] += w * model.prices[p * N + i];
      }
    }
  }
  return pol;
}

AverageProfits average_profits(const PricingPolicy& policy,
                               const CmdpModel& model) {
  const std::size_t N = model.num_providers;
  AverageProfits avg;
  avg.cp.assign(N, 0.0);
  for (std::size_t k = 0; k < model.num_states; ++k) {
    const double pk = policy.stationary.p.at(k);
    if (pk == 0.0) continue;
    for (std::size_t a = 0; a < model.num_actions; ++a) {
      const std::size_t p = model.pair(k, a);
      const double w = pk * policy.varphi[p];
      if (w == 0.0) continue;
      avg.sg += w * model.utility[p];
      avg.revenue_term += w * model.revenue_term[p];
      avg.mismatch_term += w * model.mismatch_term[p];
      for (std::size_t i = 0; i < N; ++i) avg.cp[i] += w * model.payoffs[p * N + i];
    }
  }
  return avg;
}

IcgResult icg_solve(SlotGame& game) {
  IcgResult r;
  r.model = CmdpModel::from_game(game);
  r.lp = lp::solve(build_cmdp_lp(r.model));
  if (r.lp.status != lp::Status::kOptimal) {
    throw InfeasibleError(std::string("pricing LP is ") + lp::to_string(r.lp.status));
  }
  r.policy = extract_policy(r.lp, r.model);
  r.averages = average_profits(r.policy, r.model);
  return r;
}

CentResult cent_solve(SlotGame& game) {
  std::optional<CentResult> best;
  for (std::size_t k = 0; k < game.num_states(); ++k) {
    for (std::size_t a = 0; a < game.num_actions(); ++a) {
      const PairOutcome& o = game.outcome(k, a);
      if (!o.prices_in_band) continue;
      if (!best || o.utility.total > best->outcome.utility.total) {
        best = CentResult{k, a, o};
      }
    }
  }
  if (!best) {
    throw InfeasibleError("no partition/action pair keeps prices in the band");
  }
  return *best;
}

NoCoopResult nocoop_solve(SlotGame& game) {
  const std::size_t k = game.space().singletons_id();
  const double lo = game.inputs().price_lo, hi = game.inputs().price_hi;
  std::optional<std::size_t> best;
  double best_sales = 0.0;
  std::size_t least_bad = 0;
  double least_violation = lp::kInfinity;
  for (std::size_t a = 0; a < game.num_actions(); ++a) {
    const PairOutcome& o = game.outcome(k, a);
    double sales = 0.0, violation = 0.0;
    for (std::size_t i = 0; i < o.power.size(); ++i) {
      sales += o.prices[i] * o.power[i];
      violation = std::max({violation, lo - o.prices[i], o.prices[i] - hi});
    }
    if (o.prices_in_band && (!best || sales > best_sales)) {
      best = a;
      best_sales = sales;
    }
    if (violation < least_violation) {
      least_violation = violation;
      least_bad = a;
    }
  }
  NoCoopResult r;
  r.price_feasible = best.has_value();
  r.action = best.value_or(least_bad);
  r.outcome = game.outcome(k, r.action);
  return r;
}

}  // namespace gridcoal
