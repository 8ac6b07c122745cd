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

#include "sasv/fusion.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <unordered_set>

#include "sasv/errors.hpp"

namespace sasv {

Embedding EnrollAverage(std::span<const Embedding> embeddings) {
  if (embeddings.empty()) throw DataError("no enrollment embeddings to average");
  const std::size_t dim = embeddings.front().dim();
  if (dim == 0) throw DataError("embedding has dimension zero");
  Embedding mean{std::vector<double>(dim, 0.0)};
  for (const auto &e : embeddings) {
    if (e.dim() != dim)
      throw DataError("embedding dimension mismatch: " + std::to_string(e.dim()) +
                      " vs " + std::to_string(dim));
    for (std::size_t i = 0; i < dim; ++i) mean.values[i] += e.values[i];
  }
  for (double &v : mean.values) v /= static_cast<double>(embeddings.size());
  return mean;
}

double CosineScore(const Embedding &a, const Embedding &b) {
  if (a.dim() != b.dim())
    throw DataError("embedding dimension mismatch: " + std::to_string(a.dim()) +
                    " vs " + std::to_string(b.dim()));
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw DataError("zero-norm embedding");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

double LinearFuse(std::span<const double> scores, const LinearFusionSpec &spec) {
  if (scores.size() != spec.weights.size())
    throw DataError("linear fusion expects " + std::to_string(spec.weights.size()) +
                    " scores, got " + std::to_string(scores.size()));
  if (std::all_of(spec.weights.begin(), spec.weights.end(),
                  [](double w) { return w == 0.0; }))
    throw DataError("all fusion weights are zero");
  double sum = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) sum += spec.weights[i] * scores[i];
  return sum;
}

double LseFuse(double llr_cm, double llr_asv, LsePolicy policy) {
  const double p = policy.p;
  if (!(p >= 0.0 && p <= 1.0)) throw DataError("LSE weight p must lie in [0, 1]");
  if (!std::isfinite(llr_cm) || !std::isfinite(llr_asv))
    throw DataError("LSE fusion inputs must be finite");
  if (p == 1.0 || llr_cm == llr_asv) return llr_asv;
  if (p == 0.0) return llr_cm;
  // Shift by the smaller LLR so one exponent is zero and the other negative.
  const double m = std::min(llr_cm, llr_asv);
  const double sum = p * std::exp(-(llr_asv - m)) + (1.0 - p) * std::exp(-(llr_cm - m));
  const double fused = m - std::log(sum);
  const double upper = std::min(llr_asv - std::log(p), llr_cm - std::log1p(-p));
  return std::clamp(fused, m, upper);
}

WeightGrid WeightGrid::Parse(std::string_view spec) {
  WeightGrid g;
  double *fields[3] = {&g.start, &g.stop, &g.step};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = i < 2 ? spec.find(':', start) : spec.size();
    if (colon == std::string_view::npos)
      throw DataError("grid must be start:stop:step, got '" + std::string(spec) + "'");
    const std::string_view tok = spec.substr(start, colon - start);
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), *fields[i]);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
      throw DataError("grid field is not a number: '" + std::string(tok) + "'");
    start = colon + 1;
  }
  return g;
}

std::vector<double> WeightGrid::Points() const {
  if (!(step > 0.0)) throw DataError("grid step must be positive");
  if (!(start <= stop)) throw DataError("grid start exceeds stop");
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
  for (long k = 0; k <= n; ++k)
    out.push_back(std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12);
  return out;
}

SweepObjective ParseSweepObjective(std::string_view name) {
  if (name == "min_a_dcf" || name == "a_dcf") return SweepObjective::kMinADcf;
  if (name == "act_a_dcf") return SweepObjective::kActADcf;
  throw DataError("unknown sweep objective '" + std::string(name) + "'");
}

std::string_view ToString(SweepObjective objective) {
  return objective == SweepObjective::kMinADcf ? "min_a_dcf" : "act_a_dcf";
}

SweepReport GridSearchWeight(std::span<const double> grid,
                             const std::function<double(double)> &objective) {
  if (grid.empty()) throw DataError("empty weight grid");
  std::vector<double> points(grid.begin(), grid.end());
  for (double p : points)
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("grid weights must lie in [0, 1]");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  SweepReport report;
  for (double p : points) report.table.push_back({p, objective(p)});
  const GridPoint *best = &report.table.front();
  for (const auto &pt : report.table)
    if (pt.objective < best->objective) best = &pt;
  report.best_p = best->p;
  report.best_objective = best->objective;
  return report;
}

SasvScores FuseLse(const PairedSasvScores &llrs, LsePolicy policy) {
  auto fuse = [policy](std::span<const PairedScore> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto &t : v) out.push_back(LseFuse(t.cm, t.asv, policy));
    return out;
  };
  return {fuse(llrs.target), fuse(llrs.nontarget), fuse(llrs.spoof)};
}

SweepReport GridSearchWeight(const PairedSasvScores &llrs,
                             SweepObjective objective, const CostModel &cost,
                             std::span<const double> grid) {
  SweepReport report = GridSearchWeight(grid, [&](double p) {
    const SasvScores fused = FuseLse(llrs, {p});
    return objective == SweepObjective::kMinADcf ? MinADcf(fused, cost).value
                                                 : ActADcf(fused, cost);
  });
  report.objective = std::string(ToString(objective));
  return report;
}

std::vector<NamedEmbedding> ParseEmbeddings(std::istream &in) {
  std::vector<NamedEmbedding> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id) || id.front() == '#') continue;
    NamedEmbedding e{id, {}};
    std::string tok;
    while (fields >> tok) {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
        throw ParseError(number, "embedding component is not a finite number: '" + tok + "'");
      e.embedding.values.push_back(v);
    }
    if (e.embedding.values.empty()) throw ParseError(number, "embedding has no components");
    if (!out.empty() && e.embedding.dim() != out.front().embedding.dim())
      throw ParseError(number, "embedding dimension " + std::to_string(e.embedding.dim()) +
                                   " differs from " +
                                   std::to_string(out.front().embedding.dim()));
    if (!seen.insert(id).second) throw ParseError(number, "duplicate utt_id '" + id + "'");
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace sasv
