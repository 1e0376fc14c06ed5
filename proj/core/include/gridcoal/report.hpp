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

// CSV and summary output of a run.

#ifndef GRIDCOAL_REPORT_HPP
#define GRIDCOAL_REPORT_HPP

#include <filesystem>
#include <ostream>
#include <string>

#include "gridcoal/experiment.hpp"

namespace gridcoal {

/// Per-slot (X - NoCoop) / |NoCoop| in percent, averaged over slots.
/// NaN when NoCoop is missing from the report.
double mean_improvement_pct(const RunReport& report, Scheme scheme, bool sg);

void write_sg_profit_csv(const RunReport& report, std::ostream& out);
void write_cp_profit_csv(const RunReport& report, std::ostream& out);
void write_prices_csv(const RunReport& report, std::ostream& out);
void write_partitions_csv(const RunReport& report, std::ostream& out);
void write_improvement_csv(const RunReport& report, std::ostream& out);
void write_summary(const RunReport& report, std::ostream& out);

/// Writes every file into `dir` (created if missing). Throws
/// std::filesystem::filesystem_error or std::ios_base::failure on IO errors.
void write_report(const RunReport& report, const std::filesystem::path& dir);

/// Shortest round-trip decimal form.
std::string format_number(double v);

}  // namespace gridcoal

#endif  // GRIDCOAL_REPORT_HPP
