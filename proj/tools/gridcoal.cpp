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

// gridcoal: run the interactive cooperative game experiment and inspect its
// pieces.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gridcoal/errors.hpp"
#include "gridcoal/experiment.hpp"
#include "gridcoal/report.hpp"
#include "gridcoal/scenario.hpp"

namespace {

using namespace gridcoal;

struct Common {
  std::string scenario = "paper6";
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--scenario", c.scenario, "scenario file or built-in name")
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "override the scenario seed");
}

Scenario load(const Common& c) {
  Scenario sc = load_scenario(c.scenario, c.seed);
  for (const auto& w : sc.warnings) std::cerr << "warning: " << w << '\n';
  return sc;
}

std::shared_ptr<const StateSpace> space_for(const Scenario& sc) {
  return std::make_shared<const StateSpace>(static_cast<int>(sc.num_providers()));
}

int cmd_run(const Common& c, const std::string& schemes, const std::string& out,
            unsigned threads) {
  const Scenario sc = load(c);
  ExperimentOptions opt;
  opt.threads = threads;
  const RunReport report = run_experiment(sc, parse_schemes(schemes), opt);
  write_report(report, out);
  write_summary(report, std::cout);
  return 0;
}

int cmd_policy(const Common& c, std::size_t slot) {
  const Scenario sc = load(c);
  SlotGame game = make_slot_game(sc, slot, space_for(sc));
  const IcgResult res = icg_solve(game);
  const std::size_t A = game.num_actions();

  std::cout << "slot " << slot << ": LP objective "
            << format_number(res.lp.objective_value) << ", " << res.lp.pivots
            << " pivots\n";
  std::cout << "expected prices:";
  for (double p : res.policy.expected_prices) std::cout << ' ' << format_number(p);
  std::cout << "\n\n" << std::left << std::setw(6) << "state" << std::setw(24)
            << "partition" << std::setw(12) << "p";
  for (std::size_t a = 0; a < A; ++a) {
    std::cout << std::setw(10) << ("a" + std::to_string(a));
  }
  std::cout << '\n' << std::fixed << std::setprecision(6);
  for (std::size_t k = 0; k < game.num_states(); ++k) {
    std::cout << std::setw(6) << k << std::setw(24) << game.space().state(k).to_string()
              << std::setw(12) << res.policy.stationary.p[k];
    for (std::size_t a = 0; a < A; ++a) {
      std::cout << std::setw(10) << res.policy.action_prob(k, a, A);
    }
    if (res.policy.fallback[k]) std::cout << " fallback";
    std::cout << '\n';
  }
  return 0;
}

int cmd_analyze(const Common& c, std::size_t slot, std::size_t action,
                const std::string& csv, double epsilon) {
  Scenario sc = load(c);
  if (epsilon >= 0.0) sc.dynamics.epsilon = epsilon;
  sc.dynamics.validate();
  SlotGame game = make_slot_game(sc, slot, space_for(sc));
  if (action >= game.num_actions()) {
    throw DomainError("action id " + std::to_string(action) + " outside [0, " +
                      std::to_string(game.num_actions()) + ")");
  }
  const TransitionMatrix& t = game.transition(action);
  const StateSpace& space = game.space();
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < space.size(); ++k) {
    labels.push_back(space.state(k).to_string());
  }
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::ios_base::failure("cannot write " + csv);
    t.write_csv(out, labels);
  }

  std::cout << "slot " << slot << ", action " << action << " (delta:";
  for (double d : game.actions().actions[action]) std::cout << ' ' << format_number(d);
  std::cout << ")\nT, off-diagonal entries:\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      if (i != j && t(i, j) > 0.0) {
        std::cout << "  " << labels[i] << " -> " << labels[j] << "  "
                  << format_number(t(i, j)) << '\n';
      }
    }
  }
  const auto p = stationary_distribution(t);
  std::cout << "stationary distribution (" << (p.unichain ? "unichain" : "multichain")
            << ", residual " << format_number(p.residual) << "):\n";
  for (std::size_t k = 0; k < p.p.size(); ++k) {
    if (p.p[k] > 1e-12) {
      std::cout << "  " << labels[k] << "  " << format_number(p.p[k]) << '\n';
    }
  }
  std::cout << "absorbing states:";
  for (std::size_t k : absorbing_states(t)) std::cout << ' ' << labels[k];
  std::cout << "\nergodic sets: " << ergodic_sets(t).size() << '\n';
  return 0;
}

int cmd_baseline(const Common& c) {
  const Scenario sc = load(c);
  const RunReport report =
      run_experiment(sc, {Scheme::kCent, Scheme::kNoCoop});
  std::cout << "slot,scheme,sg_profit,cp_profit_total,partition\n";
  for (const auto& r : report.records) {
    double cp = 0.0;
    for (double x : r.cp_profit) cp += x;
    std::cout << r.slot << ',' << to_string(r.scheme) << ','
              << format_number(r.sg_profit) << ',' << format_number(cp) << ','
              << '"' << report.partition_labels[r.partitions.front().first] << "\"\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Smart-grid pricing with cooperative cloud providers"};
  app.require_subcommand(1);

  Common common;
  std::string schemes = "icg,cent,nocoop";
  std::string out = "out";
  unsigned threads = 0;
  std::size_t slot = 0;
  std::size_t action = 0;
  std::string csv;
  double epsilon = -1.0;

  auto* run = app.add_subcommand("run", "run the experiment and write CSV reports");
  add_common(run, common);
  run->add_option("--schemes", schemes, "comma-separated: icg,cent,nocoop")
      ->capture_default_str();
  run->add_option("--out", out, "output directory")->capture_default_str();
  run->add_option("--threads", threads, "worker threads (0: all cores)");

  auto* policy = app.add_subcommand("policy", "print the pricing policy of one slot");
  add_common(policy, common);
  policy->add_option("--slot", slot, "slot index")->required();

  auto* analyze =
      app.add_subcommand("analyze", "coalition dynamics under one grid action");
  add_common(analyze, common);
  analyze->add_option("--slot", slot, "slot index")->required();
  analyze->add_option("--delta", action, "action id")->required();
  analyze->add_option("--csv", csv, "also write the full matrix as CSV");
  analyze->add_option("--epsilon", epsilon, "override the irrational-move rate");

  auto* baseline = app.add_subcommand("baseline", "CENT and NoCoop per slot");
  add_common(baseline, common);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(common, schemes, out, threads);
    if (*policy) return cmd_policy(common, slot);
    if (*analyze) return cmd_analyze(common, slot, action, csv, epsilon);
    if (*baseline) return cmd_baseline(common);
  } catch (const std::exception& e) {
    std::cerr << "gridcoal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
