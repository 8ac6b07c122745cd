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

#ifndef SASV_METRICS_HPP_
#define SASV_METRICS_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sasv/protocol_io.hpp"

namespace sasv {

// Decision convention used by every metric here: a trial is accepted iff
// score >= threshold.

/// Two-class scores. `pos` is bonafide (CM) or target (ASV).
struct BinaryScores {
  std::vector<double> pos;
  std::vector<double> neg;
};

/// Three-class scores with one (fused) score per trial.
struct SasvScores {
  std::vector<double> target;
  std::vector<double> nontarget;
  std::vector<double> spoof;
};

struct PairedScore {
  double asv = 0.0;
  double cm = 0.0;
};

/// Three-class trials carrying both subsystem scores, for tandem metrics.
struct PairedSasvScores {
  std::vector<PairedScore> target;
  std::vector<PairedScore> nontarget;
  std::vector<PairedScore> spoof;
};

/// Costs and priors for the DCF family. Binary metrics use pi_target
/// against 1 - pi_target with c_miss / c_fa. SASV and tandem metrics use
/// all three priors, which must sum to one.
struct CostModel {
  double c_miss = 1.0;
  double c_fa = 1.0;
  double c_fa_spoof = 1.0;
  double pi_target = 0.5;
  double pi_nontarget = 0.25;
  double pi_spoof = 0.25;

  void ValidateBinary() const;
  void ValidateSasv() const;
  /// min(c_miss * pi, c_fa * (1 - pi)).
  double BinaryNormalizer() const;
  /// min(c_miss * pi_tar, c_fa * pi_non + c_fa_spoof * pi_spf).
  double SasvNormalizer() const;
};

struct DetPoint {
  double threshold;
  double p_miss;
  double p_fa;
};

/// DET operating points, ascending in threshold: -inf, the midpoints between
/// adjacent distinct pooled scores, +inf.
std::vector<DetPoint> DetCurve(const BinaryScores &s);

struct EerResult {
  double rate;
  /// Threshold of the DET point on the crossing segment nearest to
  /// p_miss == p_fa; the lower one on ties.
  double threshold;
};

EerResult ComputeEer(const BinaryScores &s);
inline double Eer(const BinaryScores &s) { return ComputeEer(s).rate; }

struct DcfResult {
  double value;
  double threshold;
};

/// Normalized minimum DCF over DetCurve thresholds; ties go to the smallest
/// threshold.
DcfResult MinDcf(const BinaryScores &s, const CostModel &cost);

/// Normalized DCF at the Bayes threshold log(c_fa (1-pi)) - log(c_miss pi).
double ActDcf(const BinaryScores &llrs, const CostModel &cost);

/// Cost of log-likelihood ratios, in bits. Inputs are natural-log LLRs.
double Cllr(const BinaryScores &llrs);

/// Minimum normalized a-DCF over thresholds from the pooled score set.
DcfResult MinADcf(const SasvScores &s, const CostModel &cost);

/// a-DCF at the Bayes threshold for fused LLRs.
double ActADcf(const SasvScores &llrs, const CostModel &cost);

struct TdcfResult {
  double value;
  double cm_threshold;
  double asv_threshold;
};

/// Minimum normalized tandem DCF over CM thresholds with the ASV gate fixed.
/// Without an explicit ASV threshold the gate sits at the ASV EER threshold
/// of target vs nontarget ASV scores.
TdcfResult MinTDcf(const PairedSasvScores &s, const CostModel &cost,
                   std::optional<double> asv_threshold = std::nullopt);

struct TeerConfig {
  /// Points of the uniform ASV threshold grid over the observed ASV range.
  std::size_t grid_points = 256;
  /// Bisection stops when the ASV bracket is narrower than this fraction of
  /// the grid step.
  double relative_tolerance = 1e-6;
};

struct TeerResult {
  double rate;
  double asv_threshold;
  double cm_threshold;
};

/// Concurrent tandem EER. Throws NoConcurrentPointError when
/// p_fa_spoof - p_miss never changes sign along the ASV grid.
TeerResult TEer(const PairedSasvScores &s, const TeerConfig &cfg = {});

/// All detection metrics for one run. Absent members were not computed.
struct MetricReport {
  std::optional<double> eer;
  std::optional<double> eer_threshold;
  std::optional<double> min_dcf;
  std::optional<double> min_dcf_threshold;
  std::optional<double> act_dcf;
  std::optional<double> cllr;
  std::optional<double> a_dcf;
  std::optional<double> a_dcf_threshold;
  std::optional<double> t_dcf;
  std::optional<double> t_dcf_asv_threshold;
  std::optional<double> t_dcf_cm_threshold;
  /// Set when t-EER was requested; holds nullopt when no concurrent point
  /// exists.
  std::optional<std::optional<double>> t_eer;
};

/// EER, minDCF, actDCF and Cllr on CM scores treated as LLRs.
MetricReport EvaluateBinary(const BinaryScores &s, const CostModel &cost);

enum class MetricKind { kEer, kMinDcf, kActDcf, kCllr, kMinADcf };
enum class GroupBy { kAttack, kCodec, kAttackCodec };

MetricKind ParseMetricKind(std::string_view name);
std::string_view ToString(MetricKind kind);

/// Table of a metric broken down by attack (rows) and codec (columns), with
/// a trailing pooled row and column. cells[r][c] has rows.size() + 1 rows and
/// columns.size() + 1 columns; the last of each is the pooled entry.
struct BreakdownTable {
  std::string metric;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<double>>> cells;
};

/// CM breakdown. A cell scores the spoofed trials of its attack and codec
/// against all bonafide trials of the same codec; the pooled column drops the
/// codec restriction and the pooled row drops the attack restriction. Cells
/// with an empty class are absent.
BreakdownTable GroupedEval(const ScoreSet &set, GroupBy group_by,
                           MetricKind metric, const CostModel &cost);

/// A fused SASV trial with the attack and codec of its test utterance.
struct AttributedTrial {
  TrialClass trial_class;
  double score;
  std::string attack_id;
  std::string codec_id;
};

/// SASV breakdown with min a-DCF: target and nontarget trials of the codec
/// against spoof trials of the attack and codec.
BreakdownTable GroupedEvalSasv(std::span<const AttributedTrial> trials,
                               GroupBy group_by, const CostModel &cost);

}  // namespace sasv

#endif  // SASV_METRICS_HPP_
