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

#include "gridcoal/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "gridcoal/errors.hpp"
#include "gridcoal/partition.hpp"
#include "gridcoal/trace.hpp"

namespace gridcoal {

namespace pt = boost::property_tree;

namespace {

const std::string kPaper6 = R"(# Six heterogeneous data centers, one per bus, hourly slots over a day.
[scenario]
name = paper6
horizon = 24
seed = 20180827

[providers]
hosts = 15000, 12000, 10000, 20000, 15000, 10000
vms_per_host = 1, 2, 3, 1, 2, 3
pue = 1.3, 1.5, 1.3, 1.6, 1.8, 1.1
p_idle = 0.086, 0.143, 0.490, 0.086, 0.143, 0.490
p_peak = 0.274, 0.518, 1.117, 0.274, 0.518, 1.117
revenue_rate = 0.10

[pricing]
price_lo = 8c
price_hi = 25c
# beta_j = beta_scale * (price_hi - price_lo) / G_j
beta_scale = 0.5
# base price drawn uniformly per bus and slot
base_lo = 8c
base_hi = 25c

[grid]
alpha1 = 0.3
alpha2 = 0.7
# background supply as a fraction of each data center's peak draw
supply_fraction = 0.7

[dynamics]
sigma = 0.5
rho = 0.99
epsilon = 0.01

[migration]
model = sampled
dollars_per_gb = 0.001
rate_mbit_per_s = 100
mean_seconds = 554
sd_seconds = 364
min_seconds = 60

[trace]
profile = diurnal
profile_lo = 0.3
profile_hi = 0.8
concentration = 50

[actions]
factors = 0.6, 0.8, 1.0, 1.2
cartesian = false
)";

using Known = std::map<std::string, std::set<std::string>>;

const Known& known_keys() {
  static const Known k{
      {"scenario", {"name", "horizon", "seed"}},
      {"providers",
       {"hosts", "vms_per_host", "pue", "p_idle", "p_peak", "revenue_rate"}},
      {"pricing",
       {"price_lo", "price_hi", "beta", "beta_scale", "base_price", "base_lo",
        "base_hi"}},
      {"grid", {"alpha1", "alpha2", "k_norm", "supply", "supply_fraction"}},
      {"dynamics", {"sigma", "rho", "epsilon"}},
      {"migration",
       {"model", "cost", "matrix", "dollars_per_gb", "rate_mbit_per_s",
        "mean_seconds", "sd_seconds", "min_seconds"}},
      {"trace",
       {"profile", "profile_lo", "profile_hi", "profile_csv", "concentration"}},
      {"actions", {"factors", "cartesian"}},
      {"allocation", {"exact_pivot", "exact_budget"}},
  };
  return k;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Drops inline comments (" ;" or " #") and records the line of every key.
std::string preprocess(const std::string& text,
                       std::map<std::string, std::size_t>& lines) {
  std::istringstream in(text);
  std::ostringstream out;
  std::string line, section;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    for (const char* mark : {" ;", " #", "\t;", "\t#"}) {
      const auto pos = line.find(mark);
      if (pos != std::string::npos) line.erase(pos);
    }
    const std::string t = trim(line);
    if (!t.empty() && t.front() == '[' && t.back() == ']') {
      section = trim(std::string_view(t).substr(1, t.size() - 2));
    } else if (!t.empty() && t.front() != ';' && t.front() != '#') {
      const auto eq = t.find('=');
      if (eq != std::string::npos) {
        lines[section + "." + trim(std::string_view(t).substr(0, eq))] = no;
      }
    }
    out << line << '\n';
  }
  return out.str();
}

class Reader {
 public:
  Reader(pt::ptree tree, std::map<std::string, std::size_t> lines,
         std::filesystem::path base)
      : tree_(std::move(tree)), lines_(std::move(lines)), base_(std::move(base)) {}

  void check_known() const {
    for (const auto& [section, body] : tree_) {
      const auto it = known_keys().find(section);
      if (body.empty() || it == known_keys().end()) {
        fail(section, "unknown section or key outside a section");
      }
      for (const auto& [key, _] : body) {
        if (!it->second.count(key)) fail(section + "." + key, "unknown key");
      }
    }
  }

  bool has(const std::string& key) const {
    return tree_.get_child_optional(pt::ptree::path_type(key, '.')).has_value();
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    return trim(tree_.get<std::string>(pt::ptree::path_type(key, '.'), fallback));
  }

  std::vector<double> numbers(const std::string& key) const {
    if (!has(key)) fail(key, "is required");
    std::vector<double> out;
    std::string all = text(key, "");
    std::istringstream in(all);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(number(key, trim(item)));
    if (out.empty()) fail(key, "expected a number list");
    return out;
  }

  double scalar(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    const auto v = numbers(key);
    if (v.size() != 1) fail(key, "expected a single number");
    return v[0];
  }

  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    const double v = scalar(key, static_cast<double>(fallback));
    if (v != std::floor(v)) fail(key, "expected an integer");
    return static_cast<std::int64_t>(v);
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const std::string v = text(key, "");
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(key, "expected true or false");
  }

  /// A list of `n` numbers, or one number broadcast to all `n`.
  std::vector<double> per_provider(const std::string& key, std::size_t n) const {
    auto v = numbers(key);
    if (v.size() == 1) v.assign(n, v[0]);
    if (v.size() != n) {
      fail(key, "expected " + std::to_string(n) + " values, got " +
                    std::to_string(v.size()));
    }
    return v;
  }

  std::filesystem::path resolve(const std::string& rel) const {
    std::filesystem::path p(rel);
    return p.is_absolute() ? p : base_ / p;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto it = lines_.find(key);
    if (it != lines_.end()) {
      throw ParseError(key + " (line " + std::to_string(it->second) + "): " + what,
                       it->second);
    }
    throw ValidationError(key, what);
  }

 private:
  double number(const std::string& key, const std::string& item) const {
    std::string s = item;
    double scale = 1.0;
    if (!s.empty() && s.back() == 'c') {  // cents
      s.pop_back();
      scale = 0.01;
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      fail(key, "'" + item + "' is not a number");
    }
    return v * scale;
  }

  pt::ptree tree_;
  std::map<std::string, std::size_t> lines_;
  std::filesystem::path base_;
};

std::vector<double> read_profile_csv(const Reader& r,
                                     const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) r.fail("trace.profile_csv", "cannot open " + path.string());
  std::vector<std::pair<long, double>> rows;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    line = trim(line);
    if (line.empty() || (no == 1 && line.rfind("slot", 0) == 0)) continue;
    const auto comma = line.find(',');
    long slot = 0;
    double f = 0.0;
    const char* end = line.data() + line.size();
    if (comma == std::string::npos ||
        std::from_chars(line.data(), line.data() + comma, slot).ec != std::errc() ||
        std::from_chars(line.data() + comma + 1, end, f).ec != std::errc()) {
      throw ParseError(path.string() + " line " + std::to_string(no) +
                           ": expected slot,total_fraction",
                       no);
    }
    rows.emplace_back(slot, f);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<double> out;
  for (const auto& [slot, f] : rows) out.push_back(f);
  return out;
}

Scenario build(const Reader& r, std::optional<std::uint64_t> seed_override) {
  r.check_known();
  Scenario sc;
  sc.name = r.text("scenario.name", "custom");
  sc.horizon = static_cast<std::size_t>(r.integer("scenario.horizon", 24));
  sc.seed = seed_override.value_or(
      static_cast<std::uint64_t>(r.integer("scenario.seed", 1)));
  if (sc.horizon == 0) r.fail("scenario.horizon", "must be positive");

  // Providers.
  if (r.text("providers.hosts", "").empty()) {
    throw ValidationError("providers", "provider list is empty");
  }
  const auto hosts = r.numbers("providers.hosts");
  const std::size_t n = hosts.size();
  if (n > static_cast<std::size_t>(kMaxPlayers)) {
    r.fail("providers.hosts",
           "at most " + std::to_string(kMaxPlayers) + " providers are supported");
  }
  const auto vph = r.has("providers.vms_per_host")
                       ? r.per_provider("providers.vms_per_host", n)
                       : std::vector<double>(n, 1.0);
  const auto pue = r.per_provider("providers.pue", n);
  const auto p_idle = r.per_provider("providers.p_idle", n);
  const auto p_peak = r.per_provider("providers.p_peak", n);
  const auto rate = r.has("providers.revenue_rate")
                        ? r.per_provider("providers.revenue_rate", n)
                        : std::vector<double>(n, 0.10);
  for (std::size_t i = 0; i < n; ++i) {
    DataCenterSpec s;
    s.id = static_cast<int>(i);
    s.bus = static_cast<int>(i);
    s.hosts = static_cast<std::int64_t>(hosts[i]);
    s.vms_per_host = static_cast<std::int64_t>(vph[i]);
    s.pue = pue[i];
    s.p_idle = p_idle[i];
    s.p_peak = p_peak[i];
    s.revenue_rate = rate[i];
    sc.providers.push_back(s);
  }

  // Grid.
  sc.grid.alpha1 = r.scalar("grid.alpha1", 0.3);
  sc.grid.alpha2 = r.scalar("grid.alpha2", 0.7);
  sc.grid.k_norm = r.scalar("grid.k_norm", -1.0);
  std::vector<double> supply(n);
  if (r.has("grid.supply")) {
    supply = r.per_provider("grid.supply", n);
  } else {
    const double frac = r.scalar("grid.supply_fraction", 0.7);
    for (std::size_t i = 0; i < n; ++i) {
      supply[i] = frac * sc.providers[i].peak_power();
    }
  }
  sc.grid.supply.assign(sc.horizon, supply);

  sc.dynamics.sigma = r.scalar("dynamics.sigma", 0.5);
  sc.dynamics.rho = r.scalar("dynamics.rho", 0.99);
  sc.dynamics.epsilon = r.scalar("dynamics.epsilon", 0.01);

  if (r.has("actions.factors")) sc.action_factors = r.numbers("actions.factors");
  sc.cartesian_actions = r.flag("actions.cartesian", false);
  sc.allocation.exact_pivot = r.integer("allocation.exact_pivot", 10000);
  sc.allocation.exact_budget = r.integer("allocation.exact_budget", 200000);

  // Random inputs, always drawn in the same order from one stream.
  std::mt19937_64 rng(sc.seed);

  const std::string mig = r.text("migration.model", "sampled");
  if (r.has("migration.matrix")) {
    const auto m = r.numbers("migration.matrix");
    if (m.size() != n * n) {
      r.fail("migration.matrix", "expected " + std::to_string(n * n) + " values");
    }
    sc.migration = MigrationCostMatrix(n, m);
  } else if (mig == "uniform") {
    sc.migration = MigrationCostMatrix::uniform(n, r.scalar("migration.cost", 0.0));
  } else if (mig == "sampled") {
    MigrationCostMatrix::TransferModel tm;
    tm.dollars_per_gb = r.scalar("migration.dollars_per_gb", tm.dollars_per_gb);
    tm.rate_mbit_per_s = r.scalar("migration.rate_mbit_per_s", tm.rate_mbit_per_s);
    tm.mean_seconds = r.scalar("migration.mean_seconds", tm.mean_seconds);
    tm.sd_seconds = r.scalar("migration.sd_seconds", tm.sd_seconds);
    tm.min_seconds = r.scalar("migration.min_seconds", tm.min_seconds);
    sc.migration = MigrationCostMatrix::sample(n, tm, rng);
  } else {
    r.fail("migration.model", "expected sampled or uniform");
  }

  const double lo = r.scalar("pricing.price_lo", 0.08);
  const double hi = r.scalar("pricing.price_hi", 0.25);
  std::vector<double> beta(n);
  if (r.has("pricing.beta")) {
    beta = r.per_provider("pricing.beta", n);
  } else {
    const double scale = r.scalar("pricing.beta_scale", 0.5);
    for (std::size_t i = 0; i < n; ++i) {
      beta[i] = supply[i] > 0.0 ? scale * (hi - lo) / supply[i] : 0.0;
    }
  }
  std::vector<double> fixed_base;
  if (r.has("pricing.base_price")) fixed_base = r.per_provider("pricing.base_price", n);
  const double base_lo = r.scalar("pricing.base_lo", lo);
  const double base_hi = r.scalar("pricing.base_hi", hi);
  if (!(base_lo <= base_hi)) r.fail("pricing.base_hi", "must be >= base_lo");
  std::uniform_real_distribution<double> base_dist(base_lo, base_hi);
  for (std::size_t t = 0; t < sc.horizon; ++t) {
    std::vector<BusPricing> row(n);
    for (std::size_t i = 0; i < n; ++i) {
      row[i].beta = beta[i];
      row[i].base_price = fixed_base.empty() ? base_dist(rng) : fixed_base[i];
      row[i].price_lo = lo;
      row[i].price_hi = hi;
    }
    sc.pricing.push_back(std::move(row));
  }

  // Workload.
  const std::string profile = r.text("trace.profile", "diurnal");
  if (r.has("trace.profile_csv")) {
    sc.trace.profile = read_profile_csv(r, r.resolve(r.text("trace.profile_csv", "")));
  } else if (profile == "diurnal") {
    sc.trace.profile = diurnal_profile(sc.horizon, r.scalar("trace.profile_lo", 0.3),
                                       r.scalar("trace.profile_hi", 0.8));
  } else {
    sc.trace.profile = r.numbers("trace.profile");
  }
  if (sc.trace.profile.size() != sc.horizon) {
    r.fail(r.has("trace.profile_csv") ? "trace.profile_csv" : "trace.profile",
           "needs one fraction per slot (" + std::to_string(sc.horizon) + ")");
  }
  for (double f : sc.trace.profile) {
    if (!(f >= 0.0 && f <= 1.0)) r.fail("trace.profile", "fractions must lie in [0, 1]");
  }
  sc.trace.concentration = r.scalar("trace.concentration", 50.0);
  std::vector<std::int64_t> cap(n);
  for (std::size_t i = 0; i < n; ++i) cap[i] = sc.providers[i].capacity();
  sc.workload = generate_trace(cap, sc.trace.profile, sc.trace.concentration, rng);

  sc.validate(&sc.warnings);
  return sc;
}

Scenario parse_with_base(const std::string& text, const std::filesystem::path& base,
                         std::optional<std::uint64_t> seed) {
  std::map<std::string, std::size_t> lines;
  std::istringstream in(preprocess(text, lines));
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError("line " + std::to_string(e.line()) + ": " + e.message(),
                     e.line());
  }
  return build(Reader(std::move(tree), std::move(lines), base), seed);
}

}  // namespace

void Scenario::validate(std::vector<std::string>* warnings) const {
  if (providers.empty()) throw ValidationError("providers", "provider list is empty");
  const std::size_t n = providers.size();
  if (n > static_cast<std::size_t>(kMaxPlayers)) {
    throw ValidationError("providers", "too many providers");
  }
  for (const auto& p : providers) {
    p.validate(warnings);
  }
  grid.validate();
  dynamics.validate();
  migration.validate();
  if (migration.size() != n) throw ValidationError("migration", "size mismatch");
  if (pricing.size() != horizon) {
    throw ValidationError("pricing", "needs one row per slot");
  }
  if (grid.supply.size() != horizon) {
    throw ValidationError("grid.supply", "needs one row per slot");
  }
  if (workload.size() != horizon) {
    throw ValidationError("trace", "workload needs one row per slot");
  }
  for (std::size_t t = 0; t < horizon; ++t) {
    if (pricing[t].size() != n) throw ValidationError("pricing", "bus without pricing");
    if (grid.supply[t].size() != n) {
      throw ValidationError("grid.supply", "bus without supply");
    }
    if (workload[t].size() != n) {
      throw ValidationError("trace", "workload width must match providers");
    }
    for (std::size_t i = 0; i < n; ++i) {
      pricing[t][i].validate();
      if (workload[t][i] < 0 || workload[t][i] > providers[i].capacity()) {
        throw ValidationError("trace", "workload outside [0, capacity]");
      }
    }
  }
  if (action_factors.empty()) {
    throw ValidationError("actions.factors", "need at least one factor");
  }
  for (double f : action_factors) {
    if (!(f >= 0.0)) throw ValidationError("actions.factors", "must be >= 0");
  }
}

std::vector<double> diurnal_profile(std::size_t slots, double lo, double hi) {
  if (!(lo >= 0.0 && lo <= hi && hi <= 1.0)) {
    throw ValidationError("trace.profile", "need 0 <= lo <= hi <= 1");
  }
  std::vector<double> f(slots);
  const double mid = 0.5 * (lo + hi), amp = 0.5 * (hi - lo);
  for (std::size_t h = 0; h < slots; ++h) {
    const double phase =
        2.0 * std::numbers::pi * (static_cast<double>(h) - 4.0) / 24.0;
    f[h] = std::clamp(mid - amp * std::cos(phase), lo, hi);
  }
  return f;
}

const std::string& builtin_scenario_text(const std::string& name) {
  if (name == "paper6") return kPaper6;
  throw ValidationError("scenario", "no built-in scenario named '" + name + "'");
}

Scenario parse_scenario(const std::string& text,
                        std::optional<std::uint64_t> seed) {
  return parse_with_base(text, std::filesystem::current_path(), seed);
}

Scenario load_scenario(const std::string& path_or_name,
                       std::optional<std::uint64_t> seed) {
  if (path_or_name == "paper6") {
    return parse_with_base(kPaper6, std::filesystem::current_path(), seed);
  }
  std::ifstream in(path_or_name);
  if (!in) {
    throw ParseError("cannot open scenario file '" + path_or_name + "'", 0);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_with_base(buf.str(),
                         std::filesystem::path(path_or_name).parent_path(), seed);
}

}  // namespace gridcoal
