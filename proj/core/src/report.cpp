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

#include "gridcoal/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

namespace gridcoal {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

double pct(double x, double base) {
  return base == 0.0 ? std::numeric_limits<double>::quiet_NaN()
                     : 100.0 * (x - base) / std::abs(base);
}

double cp_total(const SlotRecord& r) {
  return std::accumulate(r.cp_profit.begin(), r.cp_profit.end(), 0.0);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double mean_improvement_pct(const RunReport& report, Scheme scheme, bool sg) {
  if (!report.has(Scheme::kNoCoop) || !report.has(scheme)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& r : report.records) {
    if (r.scheme != scheme) continue;
    const SlotRecord& base = report.at(r.slot, Scheme::kNoCoop);
    sum += sg ? pct(r.sg_profit, base.sg_profit) : pct(cp_total(r), cp_total(base));
    ++count;
  }
  return count ? sum / static_cast<double>(count)
               : std::numeric_limits<double>::quiet_NaN();
}

void write_sg_profit_csv(const RunReport& report, std::ostream& out) {
  out << "slot,scheme,sg_profit,revenue_term,mismatch_term\n";
  for (const auto& r : report.records) {
    out << r.slot << ',' << to_string(r.scheme) << ',' << format_number(r.sg_profit)
        << ',' << format_number(r.revenue_term) << ','
        << format_number(r.mismatch_term) << '\n';
  }
}

void write_cp_profit_csv(const RunReport& report, std::ostream& out) {
  out << "slot,scheme,provider,profit\n";
  for (const auto& r : report.records) {
    for (std::size_t i = 0; i < r.cp_profit.size(); ++i) {
      out << r.slot << ',' << to_string(r.scheme) << ',' << i + 1 << ','
          << format_number(r.cp_profit[i]) << '\n';
    }
  }
}

void write_prices_csv(const RunReport& report, std::ostream& out) {
  out << "slot,scheme,provider,price,served_vms\n";
  for (const auto& r : report.records) {
    for (std::size_t i = 0; i < r.prices.size(); ++i) {
      out << r.slot << ',' << to_string(r.scheme) << ',' << i + 1 << ','
          << format_number(r.prices[i]) << ',' << r.served.at(i) << '\n';
    }
  }
}

void write_partitions_csv(const RunReport& report, std::ostream& out) {
  out << "slot,scheme,state,partition,probability,action,flagged\n";
  for (const auto& r : report.records) {
    for (const auto& [state, prob] : r.partitions) {
      out << r.slot << ',' << to_string(r.scheme) << ',' << state << ','
          << csv_field(report.partition_labels.at(state)) << ','
          << format_number(prob) << ',' << r.action << ','
          << (r.flagged ? 1 : 0) << '\n';
    }
  }
}

void write_improvement_csv(const RunReport& report, std::ostream& out) {
  out << "slot,scheme,sg_improvement_pct,cp_improvement_pct\n";
  if (!report.has(Scheme::kNoCoop)) return;
  for (const auto& r : report.records) {
    if (r.scheme == Scheme::kNoCoop) continue;
    const SlotRecord& base = report.at(r.slot, Scheme::kNoCoop);
    out << r.slot << ',' << to_string(r.scheme) << ','
        << format_number(pct(r.sg_profit, base.sg_profit)) << ','
        << format_number(pct(cp_total(r), cp_total(base))) << '\n';
  }
}

void write_summary(const RunReport& report, std::ostream& out) {
  out << "scenario=" << report.scenario << '\n'
      << "slots=" << report.records.size() / std::max<std::size_t>(1, report.schemes.size())
      << '\n'
      << "providers=" << report.num_providers << '\n';
  for (Scheme s : report.schemes) {
    out << to_string(s) << "_avg_sg_profit=" << format_number(report.mean_sg(s))
        << '\n'
        << to_string(s) << "_avg_cp_profit_total="
        << format_number(report.mean_cp_total(s)) << '\n';
  }
  for (Scheme s : {Scheme::kIcg, Scheme::kCent}) {
    if (!report.has(s) || !report.has(Scheme::kNoCoop)) continue;
    out << to_string(s) << "_vs_NoCoop_sg_improvement_pct="
        << format_number(mean_improvement_pct(report, s, true)) << '\n'
        << to_string(s) << "_vs_NoCoop_cp_improvement_pct="
        << format_number(mean_improvement_pct(report, s, false)) << '\n';
  }
  std::size_t flagged = 0;
  for (const auto& r : report.records) flagged += r.flagged ? 1 : 0;
  out << "flagged_records=" << flagged << '\n';
}

void write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto emit = [&](const char* name, void (*fn)(const RunReport&, std::ostream&)) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::ios_base::failure("cannot write " + (dir / name).string());
    }
    out.exceptions(std::ios::failbit | std::ios::badbit);
    fn(report, out);
  };
  emit("sg_profit.csv", write_sg_profit_csv);
  emit("cp_profit.csv", write_cp_profit_csv);
  emit("prices.csv", write_prices_csv);
  emit("partitions.csv", write_partitions_csv);
  if (report.has(Scheme::kNoCoop)) emit("improvement.csv", write_improvement_csv);
  emit("summary.txt", write_summary);
}

}  // namespace gridcoal
