// Copyright 2026  The sasvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SASV_REPORT_HPP_
#define SASV_REPORT_HPP_

#include <string>
#include <string_view>

#include "sasv/audit.hpp"
#include "sasv/fusion.hpp"
#include "sasv/metrics.hpp"

namespace sasv {

// Deterministic report serialization. Keys appear in a fixed order, reals
// carry 6 significant digits, infinite thresholds are written as the strings
// "inf" / "-inf" and rates are fractions. Only the text format prints
// percentages.

enum class ReportFormat { kJson, kCsv, kText };

ReportFormat ParseReportFormat(std::string_view name);

/// Rounds to 6 significant digits.
double RoundSignificant6(double v);

/// JSON or CSV. CSV is a long table: section,group,key,bin_lo,bin_hi,count.
std::string WriteReport(const AuditReport &report, ReportFormat format);

/// JSON, CSV (header + one row) or a text summary shaped like a results
/// table row.
std::string WriteReport(const MetricReport &report, ReportFormat format);

/// JSON or CSV. CSV: group column, one column per codec, "Pooled" column,
/// then a final "Pooled" row. Absent cells are written as NA.
std::string WriteReport(const BreakdownTable &table, ReportFormat format);

/// JSON or CSV.
std::string WriteReport(const SweepReport &report, ReportFormat format);

}  // namespace sasv

#endif  // SASV_REPORT_HPP_
