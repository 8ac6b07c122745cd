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

#ifndef SASV_CALIBRATION_HPP_
#define SASV_CALIBRATION_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sasv {

enum class ScalingKind { kCosineAffine, kLogistic, kIdentity };

/// Maps a raw score into [epsilon, 1 - epsilon] before the log-odds feature
/// of beta calibration.
///   cosine_affine: (s + 1) / 2
///   logistic:      1 / (1 + e^-s)
///   identity:      s (already a probability-like score)
struct ScoreScaling {
  ScalingKind kind = ScalingKind::kCosineAffine;
  double epsilon = 1e-6;

  void Validate() const;
  double Scale(double s) const;
  /// log(s' / (1 - s')) of the scaled score.
  double LogOdds(double s) const;
  bool operator==(const ScoreScaling &) const = default;
};

struct TrainConfig {
  /// Prior used to weight the two classes. nullopt uses the empirical
  /// proportion of positive samples.
  std::optional<double> effective_prior = 0.5;
  int max_iters = 100;
  /// Stop when the projected gradient norm drops to this value.
  double tolerance = 1e-8;

  void Validate() const;
};

enum class CalibratorKind { kLogReg, kBeta };

/// Monotone raw score -> LLR map.
///   logreg: llr = slope * s + offset
///   beta:   llr = slope * log(s' / (1 - s')) + offset, s' = scaling(s)
struct CalibrationModel {
  CalibratorKind kind = CalibratorKind::kLogReg;
  std::optional<ScoreScaling> scaling;  // beta only
  double slope = 1.0;
  double offset = 0.0;

  void Validate() const;
  double Apply(double score) const;
  bool operator==(const CalibrationModel &) const = default;
};

/// Solver trace of a logistic-regression fit.
struct LogRegFit {
  CalibrationModel model;
  int iterations = 0;
  double gradient_norm = 0.0;
  /// Objective after each accepted iterate, starting with the initial point.
  std::vector<double> objective_history;
};

/// Prior-weighted logistic regression with slope >= 0, solved by damped
/// projected Newton. Throws NumericalError when max_iters is hit before the
/// gradient tolerance, and DataError for empty classes or a single pooled
/// value.
LogRegFit FitLogRegDetailed(std::span<const double> pos,
                            std::span<const double> neg, const TrainConfig &tc);

CalibrationModel FitLogReg(std::span<const double> pos,
                           std::span<const double> neg, const TrainConfig &tc);

/// Univariate beta calibration: FitLogReg on the log-odds of the scaled
/// scores.
CalibrationModel FitBeta(std::span<const double> pos, std::span<const double> neg,
                         const ScoreScaling &scaling, const TrainConfig &tc);

std::vector<double> ApplyCalibration(const CalibrationModel &m,
                                     std::span<const double> scores);

/// Step-function calibrator from pool-adjacent-violators. Block i covers
/// [knots[i], knots[i+1]); scores below the first knot take the first block.
class PavCalibrator {
 public:
  PavCalibrator(std::vector<double> knots, std::vector<double> llrs);

  double Apply(double score) const;
  std::vector<double> Apply(std::span<const double> scores) const;

  const std::vector<double> &knots() const { return knots_; }
  const std::vector<double> &llrs() const { return llrs_; }

 private:
  std::vector<double> knots_;
  std::vector<double> llrs_;
};

/// Isotonic fit of the equal-prior class posterior on the pooled sorted
/// scores, turned into LLRs via logit. Posteriors are clamped to
/// [epsilon, 1 - epsilon].
PavCalibrator PavLlr(std::span<const double> pos, std::span<const double> neg,
                     double epsilon = 1e-6);

/// {"kind", "scaling": {"kind", "epsilon"} | null, "slope", "offset"}
std::string ModelToJson(const CalibrationModel &m);
CalibrationModel ModelFromJson(std::string_view json);

std::string_view ToString(ScalingKind k);
ScalingKind ParseScalingKind(std::string_view name);

}  // namespace sasv

#endif  // SASV_CALIBRATION_HPP_
