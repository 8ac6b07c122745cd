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

#include "sasv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>

#include "sasv/errors.hpp"

namespace sasv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckClass(std::span<const double> v, const char *name) {
  if (v.empty()) throw DataError(std::string("empty score class: ") + name);
  for (double x : v)
    if (!std::isfinite(x))
      throw DataError(std::string("non-finite score in class ") + name);
}

std::vector<double> Sorted(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

// Sorted distinct values of the union of all inputs.
std::vector<double> PooledDistinct(
    std::initializer_list<std::span<const double>> parts) {
  std::vector<double> pooled;
  for (auto p : parts) pooled.insert(pooled.end(), p.begin(), p.end());
  std::sort(pooled.begin(), pooled.end());
  pooled.erase(std::unique(pooled.begin(), pooled.end()), pooled.end());
  return pooled;
}

// Threshold strictly between lo and hi that accepts hi and rejects lo.
double SplitPoint(double lo, double hi) {
  const double m = std::midpoint(lo, hi);
  return m > lo ? m : hi;
}

double Rate(std::size_t count, std::size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}


std::vector<double> Column(std::span<const PairedScore> v,
                           double PairedScore::*member) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto &p : v) out.push_back(p.*member);
  return out;
}

}  // namespace

void CostModel::ValidateBinary() const {
  if (!(c_miss >= 0.0) || !(c_fa >= 0.0))
    throw DataError("costs must be non-negative");
  if (c_miss == 0.0 && c_fa == 0.0) throw DataError("all costs are zero");
  if (!(pi_target >= 0.0 && pi_target <= 1.0))
    throw DataError("target prior must lie in [0, 1]");
  if (BinaryNormalizer() <= 0.0)
    throw DataError("DCF normalizer is zero for this cost model");
}

void CostModel::ValidateSasv() const {
  if (!(c_miss >= 0.0) || !(c_fa >= 0.0) || !(c_fa_spoof >= 0.0))
    throw DataError("costs must be non-negative");
  if (c_miss == 0.0 && c_fa == 0.0 && c_fa_spoof == 0.0)
    throw DataError("all costs are zero");
  for (double p : {pi_target, pi_nontarget, pi_spoof})
    if (!(p >= 0.0 && p <= 1.0)) throw DataError("priors must lie in [0, 1]");
  if (std::abs(pi_target + pi_nontarget + pi_spoof - 1.0) > 1e-9)
    throw DataError("target, nontarget and spoof priors must sum to 1");
  if (SasvNormalizer() <= 0.0)
    throw DataError("a-DCF normalizer is zero for this cost model");
}

double CostModel::BinaryNormalizer() const {
  return std::min(c_miss * pi_target, c_fa * (1.0 - pi_target));
}

double CostModel::SasvNormalizer() const {
  return std::min(c_miss * pi_target,
                  c_fa * pi_nontarget + c_fa_spoof * pi_spoof);
}

std::vector<DetPoint> DetCurve(const BinaryScores &s) {
  CheckClass(s.pos, "positive");
  CheckClass(s.neg, "negative");
  const auto pos = Sorted(s.pos);
  const auto neg = Sorted(s.neg);
  const auto pooled = PooledDistinct({pos, neg});

  std::vector<DetPoint> curve;
  curve.reserve(pooled.size() + 1);
  curve.push_back({-kInf, 0.0, 1.0});
  std::size_t ip = 0, in = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double v = pooled[i];
    while (ip < pos.size() && pos[ip] <= v) ++ip;
    while (in < neg.size() && neg[in] <= v) ++in;
    const double tau = i + 1 < pooled.size() ? SplitPoint(v, pooled[i + 1]) : kInf;
    curve.push_back({tau, Rate(ip, pos.size()), Rate(neg.size() - in, neg.size())});
  }
  return curve;
}

EerResult ComputeEer(const BinaryScores &s) {
  const auto curve = DetCurve(s);
  std::size_t i = 1;
  while (curve[i].p_miss < curve[i].p_fa) ++i;  // the last point is (1, 0)
  const DetPoint &a = curve[i - 1];
  const DetPoint &b = curve[i];
  const double da = a.p_miss - a.p_fa;  // < 0
  const double db = b.p_miss - b.p_fa;  // >= 0
  const double t = da / (da - db);
  const double rate = a.p_miss + t * (b.p_miss - a.p_miss);
  const double threshold = db < -da ? b.threshold : a.threshold;
  return {std::clamp(rate, 0.0, 1.0), threshold};
}

DcfResult MinDcf(const BinaryScores &s, const CostModel &cost) {
  cost.ValidateBinary();
  const double norm = cost.BinaryNormalizer();
  const double w_miss = cost.c_miss * cost.pi_target;
  const double w_fa = cost.c_fa * (1.0 - cost.pi_target);
  DcfResult best{kInf, kInf};
  for (const auto &pt : DetCurve(s)) {
    const double dcf = (w_miss * pt.p_miss + w_fa * pt.p_fa) / norm;
    if (dcf < best.value) best = {dcf, pt.threshold};
  }
  return best;
}

double ActDcf(const BinaryScores &llrs, const CostModel &cost) {
  cost.ValidateBinary();
  CheckClass(llrs.pos, "positive");
  CheckClass(llrs.neg, "negative");
  const double w_miss = cost.c_miss * cost.pi_target;
  const double w_fa = cost.c_fa * (1.0 - cost.pi_target);
  const double tau = std::log(w_fa) - std::log(w_miss);
  const auto misses = static_cast<std::size_t>(std::count_if(
      llrs.pos.begin(), llrs.pos.end(), [tau](double x) { return x < tau; }));
  const auto fas = static_cast<std::size_t>(std::count_if(
      llrs.neg.begin(), llrs.neg.end(), [tau](double x) { return x >= tau; }));
  return (w_miss * Rate(misses, llrs.pos.size()) +
          w_fa * Rate(fas, llrs.neg.size())) /
         cost.BinaryNormalizer();
}

namespace {

// log(1 + e^x) without overflow.
double Softplus(double x) {
  return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

double Cllr(const BinaryScores &llrs) {
  CheckClass(llrs.pos, "positive");
  CheckClass(llrs.neg, "negative");
  double sum_pos = 0.0, sum_neg = 0.0;
  for (double x : llrs.pos) sum_pos += Softplus(-x);
  for (double x : llrs.neg) sum_neg += Softplus(x);
  const double mean_pos = sum_pos / static_cast<double>(llrs.pos.size());
  const double mean_neg = sum_neg / static_cast<double>(llrs.neg.size());
  return 0.5 * (mean_pos + mean_neg) / std::numbers::ln2;
}

DcfResult MinADcf(const SasvScores &s, const CostModel &cost) {
  cost.ValidateSasv();
  CheckClass(s.target, "target");
  CheckClass(s.nontarget, "nontarget");
  CheckClass(s.spoof, "spoof");
  const auto tar = Sorted(s.target);
  const auto non = Sorted(s.nontarget);
  const auto spf = Sorted(s.spoof);
  const auto pooled = PooledDistinct({tar, non, spf});
  const double norm = cost.SasvNormalizer();
  const double w_miss = cost.c_miss * cost.pi_target;
  const double w_non = cost.c_fa * cost.pi_nontarget;
  const double w_spf = cost.c_fa_spoof * cost.pi_spoof;

  auto evaluate = [&](std::size_t rt, std::size_t rn, std::size_t rs) {
    return (w_miss * Rate(rt, tar.size()) +
            w_non * Rate(non.size() - rn, non.size()) +
            w_spf * Rate(spf.size() - rs, spf.size())) /
           norm;
  };

  DcfResult best{evaluate(0, 0, 0), -kInf};
  std::size_t it = 0, in = 0, is = 0;
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double v = pooled[i];
    while (it < tar.size() && tar[it] <= v) ++it;
    while (in < non.size() && non[in] <= v) ++in;
    while (is < spf.size() && spf[is] <= v) ++is;
    const double value = evaluate(it, in, is);
    if (value < best.value)
      best = {value, i + 1 < pooled.size() ? SplitPoint(v, pooled[i + 1]) : kInf};
  }
  return best;
}

double ActADcf(const SasvScores &llrs, const CostModel &cost) {
  cost.ValidateSasv();
  CheckClass(llrs.target, "target");
  CheckClass(llrs.nontarget, "nontarget");
  CheckClass(llrs.spoof, "spoof");
  const double w_miss = cost.c_miss * cost.pi_target;
  const double w_non = cost.c_fa * cost.pi_nontarget;
  const double w_spf = cost.c_fa_spoof * cost.pi_spoof;
  const double tau = std::log(w_non + w_spf) - std::log(w_miss);
  auto accepted = [tau](const std::vector<double> &v) {
    return static_cast<std::size_t>(
        std::count_if(v.begin(), v.end(), [tau](double x) { return x >= tau; }));
  };
  return (w_miss * Rate(llrs.target.size() - accepted(llrs.target), llrs.target.size()) +
          w_non * Rate(accepted(llrs.nontarget), llrs.nontarget.size()) +
          w_spf * Rate(accepted(llrs.spoof), llrs.spoof.size())) /
         cost.SasvNormalizer();
}

namespace {

void CheckPaired(const PairedSasvScores &s) {
  auto check = [](std::span<const PairedScore> v, const char *name) {
    if (v.empty()) throw DataError(std::string("empty trial class: ") + name);
    for (const auto &p : v)
      if (!std::isfinite(p.asv) || !std::isfinite(p.cm))
        throw DataError(std::string("non-finite score in class ") + name);
  };
  check(s.target, "target");
  check(s.nontarget, "nontarget");
  check(s.spoof, "spoof");
}

// Tandem error rates for one (asv, cm) threshold pair family: the ASV gate
// is fixed and the CM threshold sweeps -inf, midpoints, +inf.
struct TandemCurve {
  std::vector<double> cm_threshold;
  std::vector<double> p_miss;
  std::vector<double> p_fa_non;
  std::vector<double> p_fa_spf;
};

// Trials of all classes sorted by CM score, shared across ASV thresholds.
class TandemSweep {
 public:
  explicit TandemSweep(const PairedSasvScores &s)
      : n_{s.target.size(), s.nontarget.size(), s.spoof.size()} {
    auto add = [this](std::span<const PairedScore> v, int cls) {
      for (const auto &p : v) trials_.push_back({p.cm, p.asv, cls});
    };
    add(s.target, 0);
    add(s.nontarget, 1);
    add(s.spoof, 2);
    std::sort(trials_.begin(), trials_.end(),
              [](const Trial &a, const Trial &b) { return a.cm < b.cm; });
  }

  // Rates at CM threshold -inf for the given gate.
  void GateCounts(double asv_threshold, std::size_t pass[3]) const {
    pass[0] = pass[1] = pass[2] = 0;
    for (const auto &t : trials_)
      if (t.asv >= asv_threshold) ++pass[t.cls];
  }

  TandemCurve Curve(double asv_threshold) const {
    std::size_t pass[3];
    GateCounts(asv_threshold, pass);
    const std::size_t fail_target = n_[0] - pass[0];
    TandemCurve c;
    std::size_t rejected[3] = {0, 0, 0};
    auto emit = [&](double tau) {
      c.cm_threshold.push_back(tau);
      c.p_miss.push_back(Rate(fail_target + rejected[0], n_[0]));
      c.p_fa_non.push_back(Rate(pass[1] - rejected[1], n_[1]));
      c.p_fa_spf.push_back(Rate(pass[2] - rejected[2], n_[2]));
    };
    emit(-kInf);
    std::size_t i = 0;
    while (i < trials_.size()) {
      const double v = trials_[i].cm;
      while (i < trials_.size() && trials_[i].cm == v) {
        if (trials_[i].asv >= asv_threshold) ++rejected[trials_[i].cls];
        ++i;
      }
      emit(i < trials_.size() ? SplitPoint(v, trials_[i].cm) : kInf);
    }
    return c;
  }

  std::size_t count(int cls) const { return n_[cls]; }

 private:
  struct Trial {
    double cm;
    double asv;
    int cls;
  };
  std::vector<Trial> trials_;
  std::size_t n_[3];
};

}  // namespace

TdcfResult MinTDcf(const PairedSasvScores &s, const CostModel &cost,
                   std::optional<double> asv_threshold) {
  cost.ValidateSasv();
  CheckPaired(s);
  const double tau_asv =
      asv_threshold ? *asv_threshold
                    : ComputeEer({Column(s.target, &PairedScore::asv),
                                  Column(s.nontarget, &PairedScore::asv)})
                          .threshold;
  const TandemSweep sweep(s);
  const TandemCurve c = sweep.Curve(tau_asv);
  const double norm = cost.SasvNormalizer();
  const double w_miss = cost.c_miss * cost.pi_target;
  const double w_non = cost.c_fa * cost.pi_nontarget;
  const double w_spf = cost.c_fa_spoof * cost.pi_spoof;
  TdcfResult best{kInf, kInf, tau_asv};
  for (std::size_t i = 0; i < c.cm_threshold.size(); ++i) {
    const double value =
        (w_miss * c.p_miss[i] + w_non * c.p_fa_non[i] + w_spf * c.p_fa_spf[i]) / norm;
    if (value < best.value) best = {value, c.cm_threshold[i], tau_asv};
  }
  return best;
}

namespace {

// Solution of p_miss == p_fa_non along the CM sweep for one ASV gate.
struct GatePoint {
  bool valid = false;
  double rate = 0.0;      // common value of p_miss and p_fa_non
  double gap = 0.0;       // p_fa_spf - rate
  double cm_threshold = 0.0;
};

GatePoint SolveGate(const TandemSweep &sweep, double asv_threshold) {
  const TandemCurve c = sweep.Curve(asv_threshold);
  const std::size_t n = c.p_miss.size();
  std::size_t i = 0;
  while (i < n && c.p_miss[i] < c.p_fa_non[i]) ++i;
  GatePoint g;
  if (i == n) return g;  // unreachable: the last point has p_fa_non == 0
  if (c.p_miss[i] == c.p_fa_non[i]) {
    // Both rates are flat over the run of equal points; p_fa_spf is not, so
    // take the point of the run closest to concurrency.
    std::size_t best = i;
    for (std::size_t j = i; j < n && c.p_miss[j] == c.p_fa_non[j]; ++j)
      if (std::abs(c.p_fa_spf[j] - c.p_miss[j]) <
          std::abs(c.p_fa_spf[best] - c.p_miss[best]))
        best = j;
    g.valid = true;
    g.rate = c.p_miss[best];
    g.gap = c.p_fa_spf[best] - g.rate;
    g.cm_threshold = c.cm_threshold[best];
    return g;
  }
  if (i == 0) return g;  // p_miss > p_fa_non already with the CM passing all
  const double da = c.p_miss[i - 1] - c.p_fa_non[i - 1];
  const double db = c.p_miss[i] - c.p_fa_non[i];
  const double t = da / (da - db);
  g.valid = true;
  g.rate = c.p_miss[i - 1] + t * (c.p_miss[i] - c.p_miss[i - 1]);
  const double spf = c.p_fa_spf[i - 1] + t * (c.p_fa_spf[i] - c.p_fa_spf[i - 1]);
  g.gap = spf - g.rate;
  g.cm_threshold = t < 0.5 ? c.cm_threshold[i - 1] : c.cm_threshold[i];
  return g;
}

int Sign(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

TeerResult TEer(const PairedSasvScores &s, const TeerConfig &cfg) {
  CheckPaired(s);
  if (cfg.grid_points < 2) throw DataError("t-EER grid needs at least 2 points");
  if (!(cfg.relative_tolerance > 0.0))
    throw DataError("t-EER tolerance must be positive");
  const TandemSweep sweep(s);

  double lo = kInf, hi = -kInf;
  for (const auto *cls : {&s.target, &s.nontarget, &s.spoof})
    for (const auto &p : *cls) {
      lo = std::min(lo, p.asv);
      hi = std::max(hi, p.asv);
    }
  const double step = (hi - lo) / static_cast<double>(cfg.grid_points - 1);
  auto grid = [&](std::size_t k) {
    return k + 1 == cfg.grid_points ? hi : lo + static_cast<double>(k) * step;
  };

  double prev_tau = 0.0;
  GatePoint prev;
  for (std::size_t k = 0; k < cfg.grid_points; ++k) {
    const double tau = grid(k);
    const GatePoint cur = SolveGate(sweep, tau);
    if (!cur.valid) break;  // invalid for every larger ASV threshold too
    if (cur.gap == 0.0) return {cur.rate, tau, cur.cm_threshold};
    if (k > 0 && Sign(prev.gap) != Sign(cur.gap)) {
      double a_tau = prev_tau, b_tau = tau;
      GatePoint a = prev, b = cur;
      const double tol = cfg.relative_tolerance * step;
      while (b_tau - a_tau > tol) {
        const double mid = std::midpoint(a_tau, b_tau);
        if (mid <= a_tau || mid >= b_tau) break;
        const GatePoint m = SolveGate(sweep, mid);
        if (m.gap == 0.0) return {m.rate, mid, m.cm_threshold};
        if (Sign(m.gap) == Sign(a.gap)) {
          a_tau = mid;
          a = m;
        } else {
          b_tau = mid;
          b = m;
        }
      }
      const double w = a.gap / (a.gap - b.gap);
      const bool take_a = std::abs(a.gap) <= std::abs(b.gap);
      return {a.rate + w * (b.rate - a.rate), take_a ? a_tau : b_tau,
              take_a ? a.cm_threshold : b.cm_threshold};
    }
    prev = cur;
    prev_tau = tau;
  }
  throw NoConcurrentPointError(
      "no ASV threshold on the grid where p_fa_spoof crosses p_miss = p_fa_nontarget");
}

MetricReport EvaluateBinary(const BinaryScores &s, const CostModel &cost) {
  MetricReport r;
  const EerResult e = ComputeEer(s);
  r.eer = e.rate;
  r.eer_threshold = e.threshold;
  const DcfResult m = MinDcf(s, cost);
  r.min_dcf = m.value;
  r.min_dcf_threshold = m.threshold;
  r.act_dcf = ActDcf(s, cost);
  r.cllr = Cllr(s);
  return r;
}

MetricKind ParseMetricKind(std::string_view name) {
  if (name == "eer") return MetricKind::kEer;
  if (name == "min_dcf" || name == "mindcf") return MetricKind::kMinDcf;
  if (name == "act_dcf" || name == "actdcf") return MetricKind::kActDcf;
  if (name == "cllr") return MetricKind::kCllr;
  if (name == "a_dcf" || name == "min_a_dcf") return MetricKind::kMinADcf;
  throw DataError("unknown metric '" + std::string(name) + "'");
}

std::string_view ToString(MetricKind kind) {
  switch (kind) {
    case MetricKind::kEer: return "eer";
    case MetricKind::kMinDcf: return "min_dcf";
    case MetricKind::kActDcf: return "act_dcf";
    case MetricKind::kCllr: return "cllr";
    case MetricKind::kMinADcf: break;
  }
  return "min_a_dcf";
}

namespace {

// Builds the table layout and fills each cell with `cell(row, col)`, where an
// empty optional row/col selects the pooled entry.
BreakdownTable FillTable(
    std::string metric, std::vector<std::string> rows,
    std::vector<std::string> columns,
    const std::function<std::optional<double>(const std::string *,
                                              const std::string *)> &cell) {
  BreakdownTable t;
  t.metric = std::move(metric);
  t.rows = std::move(rows);
  t.columns = std::move(columns);
  t.cells.assign(t.rows.size() + 1,
                 std::vector<std::optional<double>>(t.columns.size() + 1));
  for (std::size_t r = 0; r <= t.rows.size(); ++r)
    for (std::size_t c = 0; c <= t.columns.size(); ++c)
      t.cells[r][c] = cell(r < t.rows.size() ? &t.rows[r] : nullptr,
                           c < t.columns.size() ? &t.columns[c] : nullptr);
  return t;
}

template <typename Range, typename Key>
std::vector<std::string> DistinctKeys(const Range &range, Key key) {
  std::set<std::string> keys;
  for (const auto &e : range)
    if (const std::string *k = key(e)) keys.insert(*k);
  return {keys.begin(), keys.end()};
}

}  // namespace

BreakdownTable GroupedEval(const ScoreSet &set, GroupBy group_by,
                           MetricKind metric, const CostModel &cost) {
  if (metric == MetricKind::kMinADcf)
    throw DataError("min a-DCF needs SASV trials, not CM scores");
  std::vector<std::string> rows, cols;
  if (group_by != GroupBy::kCodec)
    rows = DistinctKeys(set.entries, [](const ScoreSet::Entry &e) {
      return e.label == Label::kSpoof ? &e.attack_id : nullptr;
    });
  if (group_by != GroupBy::kAttack)
    cols = DistinctKeys(set.entries,
                        [](const ScoreSet::Entry &e) { return &e.codec_id; });

  auto cell = [&](const std::string *attack,
                  const std::string *codec) -> std::optional<double> {
    BinaryScores s;
    for (const auto &e : set.entries) {
      if (codec && e.codec_id != *codec) continue;
      if (e.label == Label::kBonafide)
        s.pos.push_back(e.score);
      else if (!attack || e.attack_id == *attack)
        s.neg.push_back(e.score);
    }
    if (s.pos.empty() || s.neg.empty()) return std::nullopt;
    switch (metric) {
      case MetricKind::kEer: return Eer(s);
      case MetricKind::kMinDcf: return MinDcf(s, cost).value;
      case MetricKind::kActDcf: return ActDcf(s, cost);
      case MetricKind::kCllr: return Cllr(s);
      case MetricKind::kMinADcf: break;
    }
    return std::nullopt;
  };
  return FillTable(std::string(ToString(metric)), std::move(rows),
                   std::move(cols), cell);
}

BreakdownTable GroupedEvalSasv(std::span<const AttributedTrial> trials,
                               GroupBy group_by, const CostModel &cost) {
  cost.ValidateSasv();
  std::vector<std::string> rows, cols;
  if (group_by != GroupBy::kCodec)
    rows = DistinctKeys(trials, [](const AttributedTrial &t) {
      return t.trial_class == TrialClass::kSpoof ? &t.attack_id : nullptr;
    });
  if (group_by != GroupBy::kAttack)
    cols = DistinctKeys(trials,
                        [](const AttributedTrial &t) { return &t.codec_id; });

  auto cell = [&](const std::string *attack,
                  const std::string *codec) -> std::optional<double> {
    SasvScores s;
    for (const auto &t : trials) {
      if (codec && t.codec_id != *codec) continue;
      switch (t.trial_class) {
        case TrialClass::kTarget: s.target.push_back(t.score); break;
        case TrialClass::kNontarget: s.nontarget.push_back(t.score); break;
        case TrialClass::kSpoof:
          if (!attack || t.attack_id == *attack) s.spoof.push_back(t.score);
          break;
      }
    }
    if (s.target.empty() || s.nontarget.empty() || s.spoof.empty())
      return std::nullopt;
    return MinADcf(s, cost).value;
  };
  return FillTable(std::string(ToString(MetricKind::kMinADcf)), std::move(rows),
                   std::move(cols), cell);
}

}  // namespace sasv
