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

#ifndef SASV_FUSION_HPP_
#define SASV_FUSION_HPP_

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sasv/metrics.hpp"

namespace sasv {

struct Embedding {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool operator==(const Embedding &) const = default;
};

/// Componentwise mean of the enrollment embeddings of one speaker.
Embedding EnrollAverage(std::span<const Embedding> embeddings);

/// Cosine similarity, clamped into [-1, 1].
double CosineScore(const Embedding &a, const Embedding &b);

struct LinearFusionSpec {
  std::vector<double> weights;
};

/// sum_i w_i * s_i.
double LinearFuse(std::span<const double> scores, const LinearFusionSpec &spec);

/// Weight p on the ASV term, 1 - p on the CM term.
struct LsePolicy {
  double p = 0.5;
};

/// Weighted negative LogSumExp of negated LLRs, a smooth minimum:
///   -log(p * exp(-llr_asv) + (1 - p) * exp(-llr_cm)).
double LseFuse(double llr_cm, double llr_asv, LsePolicy policy);

struct WeightGrid {
  double start = 0.0;
  double stop = 1.0;
  double step = 0.05;

  /// Parses "start:stop:step".
  static WeightGrid Parse(std::string_view spec);
  /// start, start + step, ... up to stop (inclusive within 1e-9).
  std::vector<double> Points() const;
};

enum class SweepObjective { kMinADcf, kActADcf };

SweepObjective ParseSweepObjective(std::string_view name);
std::string_view ToString(SweepObjective objective);

struct GridPoint {
  double p;
  double objective;
};

struct SweepReport {
  std::string objective;
  std::vector<GridPoint> table;  // ascending in p
  double best_p = 0.0;
  double best_objective = 0.0;
};

/// Evaluates `objective` at every grid point and returns the argmin; ties go
/// to the smallest p. The grid order does not matter.
SweepReport GridSearchWeight(std::span<const double> grid,
                             const std::function<double(double)> &objective);

/// Fuses calibrated (asv, cm) LLR pairs with LseFuse at every grid p and
/// scores the fused trials with the selected a-DCF objective.
SweepReport GridSearchWeight(const PairedSasvScores &llrs,
                             SweepObjective objective, const CostModel &cost,
                             std::span<const double> grid);

/// Fuses every trial of every class.
SasvScores FuseLse(const PairedSasvScores &llrs, LsePolicy policy);

/// Text format: one line per utterance, utt_id followed by the embedding
/// components. All lines must share one dimension.
struct NamedEmbedding {
  std::string utt_id;
  Embedding embedding;
};
std::vector<NamedEmbedding> ParseEmbeddings(std::istream &in);

}  // namespace sasv

#endif  // SASV_FUSION_HPP_
