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

#include "gridcoal/allocation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <sstream>

#include "gridcoal/errors.hpp"

namespace gridcoal {

// ---------------------------------------------------------------------------
// MigrationCostMatrix

MigrationCostMatrix::MigrationCostMatrix(std::size_t n,
                                         std::vector<double> row_major)
    : n_(n), cost_(std::move(row_major)) {
  if (cost_.size() != n * n) {
    throw ValidationError("migration", "matrix must be n x n");
  }
}

MigrationCostMatrix MigrationCostMatrix::sample(std::size_t n,
                                                const TransferModel& model,
                                                std::mt19937_64& rng) {
  MigrationCostMatrix m(n);
  std::normal_distribution<double> seconds(model.mean_seconds, model.sd_seconds);
  const double gb_per_second = model.rate_mbit_per_s / 8.0 / 1000.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double t = seconds(rng);
      while (t < model.min_seconds) t = seconds(rng);
      const double c = model.dollars_per_gb * gb_per_second * t;
      m.cost_[i * n + j] = c;
      m.cost_[j * n + i] = c;
    }
  }
  return m;
}

MigrationCostMatrix MigrationCostMatrix::uniform(std::size_t n, double cost) {
  MigrationCostMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m.cost_[i * n + j] = cost;
    }
  }
  return m;
}

void MigrationCostMatrix::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (cost_[i * n_ + i] != 0.0) {
      throw ValidationError("migration", "diagonal must be zero");
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(cost_[i * n_ + j] >= 0.0)) {
        throw ValidationError("migration", "costs must be >= 0");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Allocation

std::int64_t Allocation::column_load(std::size_t j) const {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < size(); ++i) s += at(i, j);
  return s;
}

std::int64_t Allocation::row_sum(std::size_t i) const {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < size(); ++j) s += at(i, j);
  return s;
}

double coalition_revenue(Coalition members, const MarketView& market) {
  if (members.empty()) throw DomainError("coalitions must be non-empty");
  double r = 0.0;
  for (int i : members.members()) {
    const auto idx = static_cast<std::size_t>(i);
    if (market.workloads[idx] < 0) throw DomainError("negative workload");
    r += static_cast<double>(market.workloads[idx]) *
         market.specs[idx].revenue_rate;
  }
  return r;
}

double coalition_cost(Coalition members, const Allocation& alloc,
                      const MarketView& market) {
  const auto ids = members.members();
  if (ids != alloc.members) {
    throw DomainError("allocation does not belong to coalition " +
                      members.to_string());
  }
  double energy = 0.0;
  double migration = 0.0;
  for (std::size_t j = 0; j < ids.size(); ++j) {
    const auto pj = static_cast<std::size_t>(ids[j]);
    energy += energy_cost(market.specs[pj], market.pricing[pj],
                          alloc.column_load(j));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i == j) continue;
      migration += static_cast<double>(alloc.at(i, j)) *
                   (*market.migration)(static_cast<std::size_t>(ids[i]), pj);
    }
  }
  return energy + migration;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Coalition-local view: members re-indexed 0..k-1.
struct LocalProblem {
  Coalition coalition;
  std::vector<int> ids;
  std::vector<std::int64_t> supply;
  std::vector<std::int64_t> cap;
  std::vector<double> mig;  // k x k
  const MarketView* market;

  LocalProblem(Coalition members, const MarketView& m)
      : coalition(members), ids(members.members()), market(&m) {
    if (ids.empty()) throw DomainError("coalitions must be non-empty");
    if (m.migration == nullptr) throw DomainError("missing migration costs");
    const std::size_t k = ids.size();
    supply.resize(k);
    cap.resize(k);
    mig.resize(k * k);
    std::int64_t total = 0, capacity = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto p = static_cast<std::size_t>(ids[i]);
      supply[i] = m.workloads[p];
      if (supply[i] < 0) throw DomainError("negative workload");
      cap[i] = m.specs[p].capacity();
      total += supply[i];
      capacity += cap[i];
      for (std::size_t j = 0; j < k; ++j) {
        mig[i * k + j] =
            (*m.migration)(p, static_cast<std::size_t>(ids[j]));
      }
    }
    if (total > capacity) {
      std::ostringstream msg;
      msg << "coalition " << members.to_string() << " demands " << total
          << " VMs but has capacity " << capacity;
      throw InfeasibleError(msg.str());
    }
  }

  std::size_t k() const noexcept { return ids.size(); }
  std::int64_t total() const {
    return std::accumulate(supply.begin(), supply.end(), std::int64_t{0});
  }

  double energy(std::size_t j, std::int64_t n) const {
    const auto p = static_cast<std::size_t>(ids[j]);
    return energy_cost(market->specs[p], market->pricing[p], n);
  }

  // Energy with the power curve replaced by its lower convex envelope: every
  // active host fully packed, so power is linear in the VM count.
  double relaxed_energy(std::size_t j, std::int64_t n) const {
    const auto p = static_cast<std::size_t>(ids[j]);
    const auto& s = market->specs[p];
    const double e = s.pue * s.p_peak * static_cast<double>(n) /
                     static_cast<double>(s.vms_per_host);
    return electricity_price(market->pricing[p], e) * e;
  }

  Allocation finish(std::vector<std::int64_t> omega) const {
    Allocation a;
    a.members = ids;
    a.omega = std::move(omega);
    a.draws.reserve(k());
    for (std::size_t j = 0; j < k(); ++j) {
      a.draws.push_back(power_draw(
          market->specs[static_cast<std::size_t>(ids[j])], a.column_load(j)));
    }
    a.objective = coalition_cost(coalition, a, *market);
    return a;
  }
};

// ---------------------------------------------------------------------------
// Exact route: transportation by successive shortest paths.

struct Arc {
  int to;
  std::int64_t cap;
  double cost;
};

class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes) : adj_(static_cast<std::size_t>(nodes)) {}

  std::size_t add_arc(int from, int to, std::int64_t cap, double cost) {
    arcs_.push_back({to, cap, cost});
    adj_[static_cast<std::size_t>(from)].push_back(arcs_.size() - 1);
    arcs_.push_back({from, 0, -cost});
    adj_[static_cast<std::size_t>(to)].push_back(arcs_.size() - 1);
    return arcs_.size() - 2;
  }

  // Pushes `amount` from s to t at minimum cost; returns the cost.
  double run(int s, int t, std::int64_t amount) {
    const std::size_t n = adj_.size();
    double total = 0.0;
    std::vector<double> dist(n);
    std::vector<std::size_t> via(n);
    while (amount > 0) {
      std::fill(dist.begin(), dist.end(), kInf);
      dist[static_cast<std::size_t>(s)] = 0.0;
      // Bellman-Ford; the residual graph has no negative cycles.
      for (std::size_t round = 0; round + 1 < n; ++round) {
        bool changed = false;
        for (std::size_t u = 0; u < n; ++u) {
          if (dist[u] == kInf) continue;
          for (std::size_t e : adj_[u]) {
            const Arc& a = arcs_[e];
            const auto v = static_cast<std::size_t>(a.to);
            if (a.cap > 0 && dist[u] + a.cost < dist[v] - 1e-15) {
              dist[v] = dist[u] + a.cost;
              via[v] = e;
              changed = true;
            }
          }
        }
        if (!changed) break;
      }
      if (dist[static_cast<std::size_t>(t)] == kInf) {
        throw InfeasibleError("transportation problem has no feasible flow");
      }
      std::int64_t push = amount;
      for (int v = t; v != s;) {
        const Arc& a = arcs_[via[static_cast<std::size_t>(v)]];
        push = std::min(push, a.cap);
        v = arcs_[via[static_cast<std::size_t>(v)] ^ 1].to;
      }
      for (int v = t; v != s;) {
        const std::size_t e = via[static_cast<std::size_t>(v)];
        arcs_[e].cap -= push;
        arcs_[e ^ 1].cap += push;
        total += static_cast<double>(push) * arcs_[e].cost;
        v = arcs_[e ^ 1].to;
      }
      amount -= push;
    }
    return total;
  }

  std::int64_t flow(std::size_t arc) const { return arcs_[arc ^ 1].cap; }

 private:
  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> adj_;
};

// Optimal routing of `supply` onto destination totals `load`.
double transport(const LocalProblem& lp, const std::vector<std::int64_t>& load,
                 std::vector<std::int64_t>* omega) {
  const int k = static_cast<int>(lp.k());
  const int source = 2 * k, sink = 2 * k + 1;
  MinCostFlow mcf(2 * k + 2);
  std::vector<std::size_t> cell(static_cast<std::size_t>(k * k));
  for (int i = 0; i < k; ++i) {
    mcf.add_arc(source, i, lp.supply[static_cast<std::size_t>(i)], 0.0);
    mcf.add_arc(k + i, sink, load[static_cast<std::size_t>(i)], 0.0);
  }
  const std::int64_t total = lp.total();
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      cell[static_cast<std::size_t>(i * k + j)] =
          mcf.add_arc(i, k + j, total, lp.mig[static_cast<std::size_t>(i * k + j)]);
    }
  }
  const double cost = mcf.run(source, sink, total);
  if (omega != nullptr) {
    omega->assign(static_cast<std::size_t>(k * k), 0);
    for (std::size_t c = 0; c < cell.size(); ++c) (*omega)[c] = mcf.flow(cell[c]);
  }
  return cost;
}

// Number of destination-total vectors (approximate beyond 2^64; only compared
// against a budget).
long double count_load_vectors(const LocalProblem& lp) {
  const auto total = static_cast<std::size_t>(lp.total());
  std::vector<long double> ways(total + 1, 0.0L);
  ways[0] = 1.0L;
  std::vector<long double> prefix(total + 2);
  for (std::size_t j = 0; j < lp.k(); ++j) {
    prefix[0] = 0.0L;
    for (std::size_t r = 0; r <= total; ++r) prefix[r + 1] = prefix[r] + ways[r];
    const auto cap = static_cast<std::size_t>(lp.cap[j]);
    for (std::size_t s = 0; s <= total; ++s) {
      const std::size_t lo = s > cap ? s - cap : 0;
      ways[s] = prefix[s + 1] - prefix[lo];
    }
  }
  return ways[total];
}

Allocation exact_route(const LocalProblem& lp) {
  const std::size_t k = lp.k();
  const std::int64_t total = lp.total();
  // energy[j][n] for n up to min(cap, total)
  std::vector<std::vector<double>> energy(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::int64_t top = std::min(lp.cap[j], total);
    energy[j].resize(static_cast<std::size_t>(top + 1));
    for (std::int64_t n = 0; n <= top; ++n) {
      energy[j][static_cast<std::size_t>(n)] = lp.energy(j, n);
    }
  }

  double best = kInf;
  std::vector<std::int64_t> best_load;
  std::vector<std::int64_t> load(k, 0);

  auto visit = [&](auto&& self, std::size_t j, std::int64_t remaining,
                   double partial) -> void {
    if (j + 1 == k) {
      if (remaining > lp.cap[j]) return;
      load[j] = remaining;
      const double e = partial + energy[j][static_cast<std::size_t>(remaining)];
      if (e >= best) return;  // migration cost is non-negative
      const double c = e + transport(lp, load, nullptr);
      if (c < best) {
        best = c;
        best_load = load;
      }
      return;
    }
    const std::int64_t top = std::min(lp.cap[j], remaining);
    for (std::int64_t n = 0; n <= top; ++n) {
      load[j] = n;
      self(self, j + 1, remaining - n,
           partial + energy[j][static_cast<std::size_t>(n)]);
    }
  };
  visit(visit, 0, total, 0.0);

  std::vector<std::int64_t> omega;
  transport(lp, best_load, &omega);
  return lp.finish(std::move(omega));
}

// ---------------------------------------------------------------------------
// Descent route.
//
// Residual graph on k source nodes (0..k-1) and k destination nodes
// (k..2k-1). Arc src i -> dst j adds `step` VMs to omega(i, j); arc
// dst j -> src i removes them and exists only while omega(i, j) >= step.
// A negative cycle in this graph reroutes VMs at fixed destination totals.
// A load shift moves `step` VMs of destination total from k' to j; it closes
// a cycle with the shortest dst k' -> dst j path.

class Descent {
 public:
  using EnergyFn = double (LocalProblem::*)(std::size_t, std::int64_t) const;

  explicit Descent(const LocalProblem& lp) : lp_(lp), k_(lp.k()) {
    omega_.assign(k_ * k_, 0);
    load_.assign(k_, 0);
    // Identity start, overflow spilled onto spare capacity in member order.
    std::vector<std::int64_t> spare(lp.cap);
    std::vector<std::int64_t> overflow(k_, 0);
    for (std::size_t i = 0; i < k_; ++i) {
      const std::int64_t own = std::min(lp.supply[i], lp.cap[i]);
      omega_[i * k_ + i] = own;
      spare[i] -= own;
      overflow[i] = lp.supply[i] - own;
    }
    for (std::size_t i = 0; i < k_; ++i) {
      for (std::size_t j = 0; j < k_ && overflow[i] > 0; ++j) {
        const std::int64_t moved = std::min(overflow[i], spare[j]);
        omega_[i * k_ + j] += moved;
        spare[j] -= moved;
        overflow[i] -= moved;
      }
    }
    for (std::size_t j = 0; j < k_; ++j) load_[j] = lp.cap[j] - spare[j];
  }

  void run() {
    const std::int64_t total = lp_.total();
    if (k_ == 1 || total == 0) return;
    // Convex phase, capacity scaling down to single VMs.
    std::int64_t step = std::bit_floor(static_cast<std::uint64_t>(total));
    for (; step >= 1; step /= 2) improve(step, &LocalProblem::relaxed_energy);
    // Repair phase on the true stepped power curve.
    std::int64_t max_a = 1;
    for (int id : lp_.ids) {
      max_a = std::max(max_a, lp_.market->specs[static_cast<std::size_t>(id)]
                                  .vms_per_host);
    }
    for (bool again = true; again;) {
      again = false;
      for (std::int64_t s = 2 * max_a; s >= 1; --s) {
        again = improve(s, &LocalProblem::energy) || again;
      }
    }
  }

  std::vector<std::int64_t> take_omega() { return std::move(omega_); }

 private:
  static constexpr std::size_t kMaxIterations = 1000000;

  double arc_cost(std::size_t u, std::size_t v) const {
    // u, v are graph nodes; returns +inf when the arc is absent.
    if (u < k_ && v >= k_) return lp_.mig[u * k_ + (v - k_)];
    if (u >= k_ && v < k_) {
      return omega_[v * k_ + (u - k_)] >= step_ ? -lp_.mig[v * k_ + (u - k_)]
                                                : kInf;
    }
    return kInf;
  }

  void apply_arc(std::size_t u, std::size_t v) {
    if (u < k_) {
      omega_[u * k_ + (v - k_)] += step_;
    } else {
      omega_[v * k_ + (u - k_)] -= step_;
    }
  }

  // Returns true when any improving cycle was applied.
  bool improve(std::int64_t step, EnergyFn energy) {
    step_ = step;
    bool any = false;
    for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
      const std::size_t nodes = 2 * k_;
      shortest_paths(nodes);
      // Rerouting cycle at fixed loads.
      bool rerouted = false;
      for (std::size_t u = 0; u < nodes && !rerouted; ++u) {
        if (dist_[u * nodes + u] < -kCycleTol) {
          cancel_cycle_through(u, nodes);
          rerouted = true;
        }
      }
      if (rerouted) {
        any = true;
        continue;
      }
      // Best load shift from destination b to destination a.
      double best = -kTol;
      std::size_t best_a = 0, best_b = 0;
      for (std::size_t a = 0; a < k_; ++a) {
        if (load_[a] + step > lp_.cap[a]) continue;
        const double gain_a = (lp_.*energy)(a, load_[a] + step) -
                              (lp_.*energy)(a, load_[a]);
        for (std::size_t b = 0; b < k_; ++b) {
          if (a == b || load_[b] < step) continue;
          const double path = dist_[(k_ + b) * nodes + (k_ + a)];
          if (path == kInf) continue;
          const double delta = gain_a + (lp_.*energy)(b, load_[b] - step) -
                               (lp_.*energy)(b, load_[b]) +
                               static_cast<double>(step) * path;
          if (delta < best) {
            best = delta;
            best_a = a;
            best_b = b;
          }
        }
      }
      if (best == -kTol) return any;
      std::size_t hops = 0;
      for (std::size_t u = k_ + best_b; u != k_ + best_a; ++hops) {
        if (hops > nodes) {
          throw NumericError("allocation descent: broken shortest path", best);
        }
        const std::size_t v = next_[u * nodes + (k_ + best_a)];
        apply_arc(u, v);
        u = v;
      }
      load_[best_a] += step;
      load_[best_b] -= step;
      any = true;
    }
    throw NumericError("allocation descent did not converge", 0.0);
  }

  void shortest_paths(std::size_t nodes) {
    dist_.assign(nodes * nodes, kInf);
    next_.assign(nodes * nodes, 0);
    for (std::size_t u = 0; u < nodes; ++u) {
      for (std::size_t v = 0; v < nodes; ++v) {
        const double c = arc_cost(u, v);
        if (c < kInf) {
          dist_[u * nodes + v] = c;
          next_[u * nodes + v] = v;
        }
      }
    }
    for (std::size_t m = 0; m < nodes; ++m) {
      for (std::size_t u = 0; u < nodes; ++u) {
        const double um = dist_[u * nodes + m];
        if (um == kInf) continue;
        for (std::size_t v = 0; v < nodes; ++v) {
          const double mv = dist_[m * nodes + v];
          if (mv == kInf) continue;
          if (um + mv < dist_[u * nodes + v] - 1e-15) {
            dist_[u * nodes + v] = um + mv;
            next_[u * nodes + v] = next_[u * nodes + m];
          }
        }
      }
    }
  }

  // Cancels a negative cycle detected at node u. Bellman-Ford from u with
  // predecessor links isolates a simple cycle.
  void cancel_cycle_through(std::size_t start, std::size_t nodes) {
    std::vector<double> d(nodes, kInf);
    std::vector<std::size_t> pred(nodes, nodes);
    d[start] = 0.0;
    std::size_t last = nodes;
    for (std::size_t round = 0; round < nodes; ++round) {
      last = nodes;
      for (std::size_t u = 0; u < nodes; ++u) {
        if (d[u] == kInf) continue;
        for (std::size_t v = 0; v < nodes; ++v) {
          const double c = arc_cost(u, v);
          if (c < kInf && d[u] + c < d[v] - kTol) {
            d[v] = d[u] + c;
            pred[v] = u;
            last = v;
          }
        }
      }
      if (last == nodes) break;
    }
    if (last == nodes) {
      throw NumericError("negative cycle vanished during cancellation", 0.0);
    }
    std::size_t x = last;
    for (std::size_t i = 0; i < nodes; ++i) x = pred[x];
    std::vector<std::size_t> cycle{x};
    for (std::size_t v = pred[x]; v != x; v = pred[v]) cycle.push_back(v);
    // cycle lists nodes backwards along the arcs
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      const std::size_t to = cycle[i];
      const std::size_t from = cycle[(i + 1) % cycle.size()];
      apply_arc(from, to);
    }
  }

  static constexpr double kTol = 1e-12;
  static constexpr double kCycleTol = 1e-9;

  const LocalProblem& lp_;
  std::size_t k_;
  std::int64_t step_ = 1;
  std::vector<std::int64_t> omega_;
  std::vector<std::int64_t> load_;
  std::vector<double> dist_;
  std::vector<std::size_t> next_;
};

Allocation descent_route(const LocalProblem& lp) {
  Descent d(lp);
  d.run();
  return lp.finish(d.take_omega());
}

}  // namespace

Allocation solve_allocation_exact(Coalition members, const MarketView& market) {
  const LocalProblem lp(members, market);
  return exact_route(lp);
}

Allocation solve_allocation_descent(Coalition members,
                                    const MarketView& market) {
  const LocalProblem lp(members, market);
  return descent_route(lp);
}

Allocation solve_allocation(Coalition members, const MarketView& market,
                            const AllocationOptions& options) {
  const LocalProblem lp(members, market);
  if (lp.k() == 1) return lp.finish({lp.supply[0]});
  if (lp.total() <= options.exact_pivot &&
      count_load_vectors(lp) <=
          static_cast<long double>(options.exact_budget)) {
    return exact_route(lp);
  }
  return descent_route(lp);
}

CoalitionEvaluation evaluate_coalition(Coalition members,
                                       const MarketView& market,
                                       const AllocationOptions& options) {
  CoalitionEvaluation ev;
  ev.allocation = solve_allocation(members, market, options);
  ev.revenue = coalition_revenue(members, market);
  ev.cost = ev.allocation.objective;
  ev.value = ev.revenue - ev.cost;
  return ev;
}

// ---------------------------------------------------------------------------
// CoalitionCache

std::size_t CoalitionCache::KeyHash::operator()(const Key& k) const noexcept {
  std::size_t h = std::hash<std::uint64_t>{}(
      (static_cast<std::uint64_t>(k.mask) << 32) ^ k.slot);
  for (double d : k.deltas) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof bits);
    h ^= std::hash<std::uint64_t>{}(bits) + 0x9e3779b97f4a7c15ULL + (h << 6) +
         (h >> 2);
  }
  return h;
}

const CoalitionEvaluation& CoalitionCache::get_or_compute(
    Coalition members, std::size_t slot, const MarketView& market,
    const std::function<CoalitionEvaluation()>& compute) {
  Key key{members.mask(), slot, {}};
  for (int i : members.members()) {
    key.deltas.push_back(market.pricing[static_cast<std::size_t>(i)].billing_ref);
  }
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  // Computed outside the lock; a racing writer for the same key produces an
  // identical value and the first insert wins.
  CoalitionEvaluation ev = compute();
  std::lock_guard lock(mutex_);
  return entries_.try_emplace(std::move(key), std::move(ev)).first->second;
}

std::size_t CoalitionCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace gridcoal
