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

#include "sasv/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "sasv/errors.hpp"

namespace sasv {

namespace {

double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double Logit(double p) { return std::log(p) - std::log1p(-p); }

void CheckFinite(std::span<const double> v, const char *name) {
  if (v.empty()) throw DataError(std::string("empty calibration class: ") + name);
  for (double x : v)
    if (!std::isfinite(x))
      throw DataError(std::string("non-finite calibration score in class ") + name);
}

// Prior-weighted logistic loss in (slope, offset) with its derivatives.
class LogRegObjective {
 public:
  LogRegObjective(std::span<const double> pos, std::span<const double> neg,
                  double prior)
      : pos_(pos),
        neg_(neg),
        w_pos_(prior / static_cast<double>(pos.size())),
        w_neg_((1.0 - prior) / static_cast<double>(neg.size())),
        prior_logit_(Logit(prior)) {}

  double Value(double w, double b) const {
    double sp = 0.0, sn = 0.0;
    for (double s : pos_) sp += Softplus(-(w * s + b + prior_logit_));
    for (double s : neg_) sn += Softplus(w * s + b + prior_logit_);
    return w_pos_ * sp + w_neg_ * sn;
  }

  // Gradient (gw, gb) and Hessian (hww, hwb, hbb).
  void Derivatives(double w, double b, double g[2], double h[3]) const {
    g[0] = g[1] = h[0] = h[1] = h[2] = 0.0;
    auto accumulate = [&](std::span<const double> v, double weight, bool positive) {
      double gw = 0.0, gb = 0.0, hww = 0.0, hwb = 0.0, hbb = 0.0;
      for (double s : v) {
        const double z = w * s + b + prior_logit_;
        const double p = Sigmoid(z);
        const double r = positive ? p - 1.0 : p;
        const double c = p * (1.0 - p);
        gw += r * s;
        gb += r;
        hww += c * s * s;
        hwb += c * s;
        hbb += c;
      }
      g[0] += weight * gw;
      g[1] += weight * gb;
      h[0] += weight * hww;
      h[1] += weight * hwb;
      h[2] += weight * hbb;
    };
    accumulate(pos_, w_pos_, true);
    accumulate(neg_, w_neg_, false);
  }

 private:
  std::span<const double> pos_;
  std::span<const double> neg_;
  double w_pos_;
  double w_neg_;
  double prior_logit_;
};

std::string FormatExact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string_view ToString(ScalingKind k) {
  switch (k) {
    case ScalingKind::kCosineAffine: return "cosine_affine";
    case ScalingKind::kLogistic: return "logistic";
    case ScalingKind::kIdentity: break;
  }
  return "identity";
}

ScalingKind ParseScalingKind(std::string_view name) {
  if (name == "cosine_affine") return ScalingKind::kCosineAffine;
  if (name == "logistic") return ScalingKind::kLogistic;
  if (name == "identity") return ScalingKind::kIdentity;
  throw DataError("unknown scaling kind '" + std::string(name) + "'");
}

void ScoreScaling::Validate() const {
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw DataError("scaling epsilon must lie in (0, 0.5)");
}

double ScoreScaling::Scale(double s) const {
  double u = s;
  switch (kind) {
    case ScalingKind::kCosineAffine: u = (s + 1.0) / 2.0; break;
    case ScalingKind::kLogistic: u = Sigmoid(s); break;
    case ScalingKind::kIdentity: break;
  }
  return std::clamp(u, epsilon, 1.0 - epsilon);
}

double ScoreScaling::LogOdds(double s) const { return Logit(Scale(s)); }

void TrainConfig::Validate() const {
  if (effective_prior && !(*effective_prior > 0.0 && *effective_prior < 1.0))
    throw DataError("effective prior must lie in (0, 1)");
  if (max_iters < 1) throw DataError("max_iters must be at least 1");
  if (!(tolerance > 0.0)) throw DataError("tolerance must be positive");
}

void CalibrationModel::Validate() const {
  if (!std::isfinite(slope) || !std::isfinite(offset))
    throw DataError("calibration parameters must be finite");
  if (slope < 0.0) throw DataError("calibration slope must be non-negative");
  if (kind == CalibratorKind::kBeta) {
    if (!scaling) throw DataError("beta calibration needs a score scaling");
    scaling->Validate();
  }
}

double CalibrationModel::Apply(double score) const {
  const double x = kind == CalibratorKind::kBeta ? scaling->LogOdds(score) : score;
  return slope * x + offset;
}

LogRegFit FitLogRegDetailed(std::span<const double> pos,
                            std::span<const double> neg, const TrainConfig &tc) {
  tc.Validate();
  CheckFinite(pos, "positive");
  CheckFinite(neg, "negative");
  const double first = pos.front();
  const auto same = [first](double x) { return x == first; };
  if (std::all_of(pos.begin(), pos.end(), same) &&
      std::all_of(neg.begin(), neg.end(), same))
    throw DataError("all calibration scores are identical; slope is unidentifiable");

  const double prior =
      tc.effective_prior.value_or(static_cast<double>(pos.size()) /
                                  static_cast<double>(pos.size() + neg.size()));
  const LogRegObjective objective(pos, neg, prior);

  LogRegFit fit;
  double w = 0.0, b = 0.0;
  double value = objective.Value(w, b);
  fit.objective_history.push_back(value);

  for (;;) {
    double g[2], h[3];
    objective.Derivatives(w, b, g, h);
    const bool at_bound = w == 0.0 && g[0] > 0.0;
    const double pg_w = at_bound ? 0.0 : g[0];
    fit.gradient_norm = std::hypot(pg_w, g[1]);
    if (fit.gradient_norm <= tc.tolerance) break;
    if (fit.iterations >= tc.max_iters)
      throw NumericalError(
          "calibration did not converge in " + std::to_string(tc.max_iters) +
              " iterations (gradient norm " + FormatExact(fit.gradient_norm) + ")",
          fit.gradient_norm);

    // Newton direction; on the active bound only the offset moves.
    double dw = 0.0, db = 0.0;
    const double det = h[0] * h[2] - h[1] * h[1];
    if (at_bound) {
      db = h[2] > 0.0 ? -g[1] / h[2] : -g[1];
    } else if (det > 0.0 && h[0] > 0.0) {
      dw = -(h[2] * g[0] - h[1] * g[1]) / det;
      db = -(h[0] * g[1] - h[1] * g[0]) / det;
    } else {
      dw = -g[0];
      db = -g[1];
    }

    // Backtracking on the projected path. Once the predicted decrease is
    // below rounding noise of the objective, the full step is taken as is.
    bool accepted = false;
    const double predicted = -(g[0] * (std::max(0.0, w + dw) - w) + g[1] * db);
    if (predicted < 1e-13 * std::max(1.0, value)) {
      w = std::max(0.0, w + dw);
      b += db;
      value = objective.Value(w, b);
      accepted = true;
    }
    for (double step = 1.0; !accepted && step > 1e-20; step *= 0.5) {
      const double nw = std::max(0.0, w + step * dw);
      const double nb = b + step * db;
      const double nv = objective.Value(nw, nb);
      const double decrease = g[0] * (nw - w) + g[1] * (nb - b);
      if (nv <= value + 1e-4 * decrease && nv < value) {
        w = nw;
        b = nb;
        value = nv;
        accepted = true;
        break;
      }
    }
    ++fit.iterations;
    if (!accepted)
      throw NumericalError("calibration line search stalled (gradient norm " +
                               FormatExact(fit.gradient_norm) + ")",
                           fit.gradient_norm);
    fit.objective_history.push_back(value);
  }

  fit.model.kind = CalibratorKind::kLogReg;
  fit.model.slope = w;
  fit.model.offset = b;
  return fit;
}

CalibrationModel FitLogReg(std::span<const double> pos,
                           std::span<const double> neg, const TrainConfig &tc) {
  return FitLogRegDetailed(pos, neg, tc).model;
}

CalibrationModel FitBeta(std::span<const double> pos, std::span<const double> neg,
                         const ScoreScaling &scaling, const TrainConfig &tc) {
  scaling.Validate();
  auto transform = [&](std::span<const double> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (double s : v) out.push_back(scaling.LogOdds(s));
    return out;
  };
  CalibrationModel m = FitLogReg(transform(pos), transform(neg), tc);
  m.kind = CalibratorKind::kBeta;
  m.scaling = scaling;
  return m;
}

std::vector<double> ApplyCalibration(const CalibrationModel &m,
                                     std::span<const double> scores) {
  m.Validate();
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(m.Apply(s));
  return out;
}

PavCalibrator::PavCalibrator(std::vector<double> knots, std::vector<double> llrs)
    : knots_(std::move(knots)), llrs_(std::move(llrs)) {
  if (knots_.empty() || knots_.size() != llrs_.size())
    throw DataError("PAV calibrator needs one LLR per knot");
}

double PavCalibrator::Apply(double score) const {
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), score);
  const std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
  return llrs_[i];
}

std::vector<double> PavCalibrator::Apply(std::span<const double> scores) const {
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(Apply(s));
  return out;
}

PavCalibrator PavLlr(std::span<const double> pos, std::span<const double> neg,
                     double epsilon) {
  CheckFinite(pos, "positive");
  CheckFinite(neg, "negative");
  if (!(epsilon > 0.0 && epsilon < 0.5))
    throw DataError("PAV epsilon must lie in (0, 0.5)");

  struct Sample {
    double score;
    bool positive;
  };
  std::vector<Sample> samples;
  samples.reserve(pos.size() + neg.size());
  for (double s : pos) samples.push_back({s, true});
  for (double s : neg) samples.push_back({s, false});
  std::sort(samples.begin(), samples.end(),
            [](const Sample &a, const Sample &b) { return a.score < b.score; });

  // Equal class weighting: each class carries total mass one.
  const double w_pos = 1.0 / static_cast<double>(pos.size());
  const double w_neg = 1.0 / static_cast<double>(neg.size());
  struct Block {
    double start;
    double mass_pos;
    double mass;
  };
  std::vector<Block> blocks;
  std::size_t i = 0;
  while (i < samples.size()) {
    Block blk{samples[i].score, 0.0, 0.0};
    while (i < samples.size() && samples[i].score == blk.start) {
      const double w = samples[i].positive ? w_pos : w_neg;
      if (samples[i].positive) blk.mass_pos += w;
      blk.mass += w;
      ++i;
    }
    // Merge while the previous block's posterior exceeds this one's.
    while (!blocks.empty() &&
           blocks.back().mass_pos * blk.mass > blk.mass_pos * blocks.back().mass) {
      blk.start = blocks.back().start;
      blk.mass_pos += blocks.back().mass_pos;
      blk.mass += blocks.back().mass;
      blocks.pop_back();
    }
    blocks.push_back(blk);
  }

  std::vector<double> knots, llrs;
  for (const auto &blk : blocks) {
    const double p = std::clamp(blk.mass_pos / blk.mass, epsilon, 1.0 - epsilon);
    knots.push_back(blk.start);
    llrs.push_back(Logit(p));
  }
  return PavCalibrator(std::move(knots), std::move(llrs));
}

std::string ModelToJson(const CalibrationModel &m) {
  std::string out = "{\"kind\": \"";
  out += m.kind == CalibratorKind::kBeta ? "beta" : "logreg";
  out += "\", \"scaling\": ";
  if (m.scaling) {
    out += "{\"kind\": \"";
    out += ToString(m.scaling->kind);
    out += "\", \"epsilon\": " + FormatExact(m.scaling->epsilon) + "}";
  } else {
    out += "null";
  }
  out += ", \"slope\": " + FormatExact(m.slope);
  out += ", \"offset\": " + FormatExact(m.offset) + "}\n";
  return out;
}

CalibrationModel ModelFromJson(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::parse_error &e) {
    throw DataError(std::string("calibration model is not valid JSON: ") + e.what());
  }
  try {
    CalibrationModel m;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "logreg")
      m.kind = CalibratorKind::kLogReg;
    else if (kind == "beta")
      m.kind = CalibratorKind::kBeta;
    else
      throw DataError("unknown calibration kind '" + kind + "'");
    const auto &sc = j.at("scaling");
    if (!sc.is_null()) {
      ScoreScaling scaling;
      scaling.kind = ParseScalingKind(sc.at("kind").get<std::string>());
      scaling.epsilon = sc.at("epsilon").get<double>();
      m.scaling = scaling;
    }
    m.slope = j.at("slope").get<double>();
    m.offset = j.at("offset").get<double>();
    m.Validate();
    return m;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(std::string("malformed calibration model: ") + e.what());
  }
}

}  // namespace sasv
