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

#include "sasv/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "sasv/errors.hpp"

namespace sasv {

namespace {

using Json = nlohmann::ordered_json;

Json Real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return RoundSignificant6(v);
}

std::string CsvReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string Dump(const Json &j) { return j.dump(2) + "\n"; }

Json HistogramJson(const Histogram &h) {
  Json j;
  Json edges = Json::array();
  for (double e : h.bin_edges) edges.push_back(Real(e));
  j["edges"] = std::move(edges);
  j["counts"] = h.counts;
  j["underflow"] = h.underflow;
  j["overflow"] = h.overflow;
  return j;
}

Json HistogramMapJson(const std::map<std::string, Histogram> &m) {
  Json j = Json::object();
  for (const auto &[k, h] : m) j[k] = HistogramJson(h);
  return j;
}

Json CountsJson(const std::map<std::string, std::size_t> &m) {
  Json j = Json::object();
  for (const auto &[k, v] : m) j[k] = v;
  return j;
}

Json PercentJson(const std::map<std::string, std::size_t> &m, std::size_t total) {
  Json j = Json::object();
  for (const auto &[k, v] : m)
    j[k] = total == 0 ? 0.0
                      : RoundSignificant6(100.0 * static_cast<double>(v) /
                                          static_cast<double>(total));
  return j;
}

void HistogramCsv(std::string &out, const std::string &section,
                  const std::string &group, const Histogram &h) {
  out += section + "," + group + ",underflow,,," + std::to_string(h.underflow) + "\n";
  for (std::size_t k = 0; k < h.counts.size(); ++k)
    out += section + "," + group + ",bin," + CsvReal(h.bin_edges[k]) + "," +
           CsvReal(h.bin_edges[k + 1]) + "," + std::to_string(h.counts[k]) + "\n";
  out += section + "," + group + ",overflow,,," + std::to_string(h.overflow) + "\n";
}

// Present fields of a MetricReport in serialization order.
std::vector<std::pair<std::string, std::optional<double>>> MetricFields(
    const MetricReport &r) {
  std::vector<std::pair<std::string, std::optional<double>>> f;
  auto add = [&f](const char *name, const std::optional<double> &v) {
    if (v) f.emplace_back(name, *v);
  };
  add("eer", r.eer);
  add("eer_threshold", r.eer_threshold);
  add("min_dcf", r.min_dcf);
  add("min_dcf_threshold", r.min_dcf_threshold);
  add("act_dcf", r.act_dcf);
  add("cllr", r.cllr);
  add("a_dcf", r.a_dcf);
  add("a_dcf_threshold", r.a_dcf_threshold);
  add("t_dcf", r.t_dcf);
  add("t_dcf_asv_threshold", r.t_dcf_asv_threshold);
  add("t_dcf_cm_threshold", r.t_dcf_cm_threshold);
  if (r.t_eer) f.emplace_back("t_eer", *r.t_eer);
  return f;
}

std::string Fixed(const std::optional<double> &v, const char *fmt) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

}  // namespace

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "json") return ReportFormat::kJson;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "text") return ReportFormat::kText;
  throw DataError("unknown report format '" + std::string(name) + "'");
}

double RoundSignificant6(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::strtod(buf, nullptr);
}

std::string WriteReport(const AuditReport &report, ReportFormat format) {
  const BalanceReport &b = report.balance;
  if (format == ReportFormat::kJson) {
    Json j;
    j["total"] = b.total;
    j["counts"] = {{"label", CountsJson(b.by_label)},
                   {"attack", CountsJson(b.by_attack)},
                   {"gender", CountsJson(b.by_gender)}};
    j["percent"] = {{"label", PercentJson(b.by_label, b.total)},
                    {"attack", PercentJson(b.by_attack, b.total)},
                    {"gender", PercentJson(b.by_gender, b.total)}};
    if (report.duration) {
      const auto &d = *report.duration;
      j["duration"] = {{"count", d.count},
                       {"mean", Real(d.mean)},
                       {"std", Real(d.stddev)},
                       {"histograms", HistogramMapJson(d.per_attack)}};
    }
    if (report.delay) {
      const auto &d = *report.delay;
      j["delay"] = {{"count", d.count},
                    {"no_speech", d.no_speech},
                    {"mean", Real(d.mean)},
                    {"histograms", HistogramMapJson(d.per_attack)}};
    }
    if (report.quality) {
      const auto &q = *report.quality;
      j["quality"] = {{"bonafide", HistogramJson(q.bonafide)},
                      {"spoof", HistogramJson(q.spoof)},
                      {"histograms", HistogramMapJson(q.per_attack)}};
    }
    return Dump(j);
  }
  if (format == ReportFormat::kCsv) {
    std::string out = "section,group,key,bin_lo,bin_hi,count\n";
    out += "counts,total,total,,," + std::to_string(b.total) + "\n";
    auto counts = [&out](const char *group, const std::map<std::string, std::size_t> &m) {
      for (const auto &[k, v] : m)
        out += std::string("counts,") + group + "," + k + ",,," + std::to_string(v) + "\n";
    };
    counts("label", b.by_label);
    counts("attack", b.by_attack);
    counts("gender", b.by_gender);
    if (report.duration)
      for (const auto &[g, h] : report.duration->per_attack) HistogramCsv(out, "duration", g, h);
    if (report.delay)
      for (const auto &[g, h] : report.delay->per_attack) HistogramCsv(out, "delay", g, h);
    if (report.quality) {
      HistogramCsv(out, "quality", "bonafide", report.quality->bonafide);
      HistogramCsv(out, "quality", "spoof", report.quality->spoof);
      for (const auto &[g, h] : report.quality->per_attack) HistogramCsv(out, "quality", g, h);
    }
    return out;
  }
  throw DataError("audit reports support json and csv only");
}

std::string WriteReport(const MetricReport &report, ReportFormat format) {
  const auto fields = MetricFields(report);
  switch (format) {
    case ReportFormat::kJson: {
      Json j = Json::object();
      for (const auto &[k, v] : fields) j[k] = v ? Real(*v) : Json(nullptr);
      return Dump(j);
    }
    case ReportFormat::kCsv: {
      std::string header, row;
      for (const auto &[k, v] : fields) {
        if (!header.empty()) {
          header += ',';
          row += ',';
        }
        header += k;
        row += v ? CsvReal(*v) : "NA";
      }
      return header + "\n" + row + "\n";
    }
    case ReportFormat::kText: {
      std::string out;
      const bool cm = report.eer || report.min_dcf || report.act_dcf || report.cllr;
      const bool sasv = report.a_dcf || report.t_dcf || report.t_eer;
      if (cm) {
        out += "minDCF   actDCF   Cllr     EER(%)\n";
        out += Fixed(report.min_dcf, "%.4f") + "   " + Fixed(report.act_dcf, "%.4f") +
               "   " + Fixed(report.cllr, "%.4f") + "   " +
               Fixed(report.eer ? std::optional(100.0 * *report.eer) : std::nullopt,
                     "%.2f") +
               "\n";
      }
      if (sasv) {
        std::optional<double> teer;
        if (report.t_eer && *report.t_eer) teer = 100.0 * **report.t_eer;
        out += "min a-DCF   min t-DCF   t-EER(%)\n";
        out += Fixed(report.a_dcf, "%.4f") + "      " + Fixed(report.t_dcf, "%.4f") +
               "      " + Fixed(teer, "%.2f") + "\n";
      }
      return out;
    }
  }
  throw DataError("unsupported report format");
}

std::string WriteReport(const BreakdownTable &table, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    Json j;
    j["metric"] = table.metric;
    j["rows"] = table.rows;
    j["columns"] = table.columns;
    Json cells = Json::array();
    for (const auto &row : table.cells) {
      Json r = Json::array();
      for (const auto &c : row) r.push_back(c ? Real(*c) : Json(nullptr));
      cells.push_back(std::move(r));
    }
    j["cells"] = std::move(cells);
    return Dump(j);
  }
  if (format == ReportFormat::kCsv) {
    std::string out = "group";
    for (const auto &c : table.columns) out += "," + c;
    out += ",Pooled\n";
    const bool empty = table.cells.empty() ||
                       (table.rows.empty() && table.columns.empty() &&
                        !table.cells[0][0]);
    if (empty) return out;
    for (std::size_t r = 0; r < table.cells.size(); ++r) {
      out += r < table.rows.size() ? table.rows[r] : std::string("Pooled");
      for (const auto &c : table.cells[r]) out += "," + (c ? CsvReal(*c) : std::string("NA"));
      out += "\n";
    }
    return out;
  }
  throw DataError("breakdown tables support json and csv only");
}

std::string WriteReport(const SweepReport &report, ReportFormat format) {
  const char *favors = report.best_p > 0.5   ? "asv"
                       : report.best_p < 0.5 ? "cm"
                                             : "balanced";
  if (format == ReportFormat::kJson) {
    Json j;
    j["objective"] = report.objective;
    Json grid = Json::array();
    for (const auto &pt : report.table)
      grid.push_back({{"p", Real(pt.p)}, {"objective", Real(pt.objective)}});
    j["grid"] = std::move(grid);
    j["best_p"] = Real(report.best_p);
    j["best_objective"] = Real(report.best_objective);
    j["best_p_favors"] = favors;
    return Dump(j);
  }
  if (format == ReportFormat::kCsv) {
    std::string out = "p," + report.objective + "\n";
    for (const auto &pt : report.table) out += CsvReal(pt.p) + "," + CsvReal(pt.objective) + "\n";
    return out;
  }
  throw DataError("sweep reports support json and csv only");
}

}  // namespace sasv
