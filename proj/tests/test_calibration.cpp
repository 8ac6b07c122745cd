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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sasv/calibration.hpp"
#include "sasv/errors.hpp"
#include "sasv/metrics.hpp"

using namespace sasv;

namespace {

// Reference solver for the prior-weighted logistic objective: nested golden
// section search in extended precision (convex in each coordinate).
struct RefSolution {
  double w;
  double b;
};

long double SoftplusL(long double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

long double RefObjective(const std::vector<double> &pos, const std::vector<double> &neg,
                         double prior, long double w, long double b) {
  const long double lp = std::log(static_cast<long double>(prior) / (1 - prior));
  long double sp = 0, sn = 0;
  for (double s : pos) sp += SoftplusL(-(w * s + b + lp));
  for (double s : neg) sn += SoftplusL(w * s + b + lp);
  return prior * sp / pos.size() + (1 - prior) * sn / neg.size();
}

template <typename F>
long double Golden(F f, long double lo, long double hi, long double tol) {
  const long double r = (std::sqrt(5.0L) - 1) / 2;
  long double a = lo, b = hi;
  long double c = b - r * (b - a), d = a + r * (b - a);
  long double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

RefSolution RefLogReg(const std::vector<double> &pos, const std::vector<double> &neg,
                      double prior) {
  auto best_b = [&](long double w) {
    return Golden([&](long double b) { return RefObjective(pos, neg, prior, w, b); }, -20,
                  20, 1e-9L);
  };
  const long double w = Golden(
      [&](long double w) { return RefObjective(pos, neg, prior, w, best_b(w)); }, 0, 20,
      1e-9L);
  return {static_cast<double>(w), static_cast<double>(best_b(w))};
}

std::vector<double> Sig(const std::vector<double> &v) {
  std::vector<double> out;
  for (double x : v) out.push_back(1.0 / (1.0 + std::exp(-x)));
  return out;
}

}  // namespace

TEST_CASE("score scaling") {
  ScoreScaling c;
  CHECK(c.Scale(0.0) == 0.5);
  CHECK(c.Scale(1.0) == 1.0 - 1e-6);
  CHECK(c.Scale(-1.0) == 1e-6);
  CHECK(c.Scale(5.0) == 1.0 - 1e-6);
  CHECK(c.LogOdds(0.0) == 0.0);
  ScoreScaling l{ScalingKind::kLogistic};
  CHECK(l.Scale(0.0) == 0.5);
  CHECK(l.LogOdds(1.5) == doctest::Approx(1.5).epsilon(1e-12));
  ScoreScaling id{ScalingKind::kIdentity};
  CHECK(id.Scale(0.25) == 0.25);
  CHECK(id.Scale(2.0) == 1.0 - 1e-6);
  for (auto k : {ScalingKind::kCosineAffine, ScalingKind::kLogistic, ScalingKind::kIdentity})
    CHECK(ParseScalingKind(ToString(k)) == k);
  CHECK_THROWS_AS(ParseScalingKind("tanh"), DataError);
  CHECK_THROWS_AS((ScoreScaling{ScalingKind::kIdentity, 0.7}.Validate()), DataError);
}

TEST_CASE("apply calibration examples") {
  CalibrationModel lr{CalibratorKind::kLogReg, std::nullopt, 2.0, 1.0};
  CHECK(ApplyCalibration(lr, std::vector<double>{0.5})[0] == 2.0);
  CalibrationModel beta{CalibratorKind::kBeta, ScoreScaling{ScalingKind::kIdentity}, 1.0, 0.0};
  CHECK(ApplyCalibration(beta, std::vector<double>{0.5})[0] == 0.0);
  CalibrationModel neg_slope{CalibratorKind::kLogReg, std::nullopt, -1.0, 0.0};
  CHECK_THROWS_AS(ApplyCalibration(neg_slope, std::vector<double>{0.5}), DataError);
  CalibrationModel no_scaling{CalibratorKind::kBeta, std::nullopt, 1.0, 0.0};
  CHECK_THROWS_AS(ApplyCalibration(no_scaling, std::vector<double>{0.5}), DataError);
}

TEST_CASE("logreg on matched Gaussian LLRs recovers identity") {
  std::mt19937_64 rng(21);
  // Classes N(+1,1) / N(-1,1): the true LLR is 2x.
  auto pos = oracle::Normal(rng, 100000, 1.0, 1.0);
  auto neg = oracle::Normal(rng, 100000, -1.0, 1.0);
  for (double &x : pos) x *= 2.0;
  for (double &x : neg) x *= 2.0;
  auto m = FitLogReg(pos, neg, {});
  CHECK(m.slope >= 0.9);
  CHECK(m.slope <= 1.1);
  CHECK(std::abs(m.offset) < 0.1);
}

TEST_CASE("logreg limiting cases") {
  std::mt19937_64 rng(22);
  auto same = oracle::Normal(rng, 500, 0.0, 1.0);
  auto m = FitLogReg(same, same, {});
  CHECK(m.slope == 0.0);
  CHECK(std::abs(m.offset) < 1e-12);

  auto pos = oracle::Normal(rng, 200, 100.0, 1.0);
  auto neg = oracle::Normal(rng, 200, -100.0, 1.0);
  try {
    auto fit = FitLogRegDetailed(pos, neg, {});
    CHECK(fit.model.slope > 0.1);
    CHECK(fit.objective_history.back() < 1e-6);
  } catch (const NumericalError &e) {
    CHECK(e.gradient_norm() > 0.0);
  }
}

TEST_CASE("separable beta fit: slope grows, error if the cap is hit") {
  std::vector<double> pos(20, 0.9), neg(20, 0.1);
  const ScoreScaling id{ScalingKind::kIdentity};
  TrainConfig tc;
  tc.max_iters = 5;
  try {
    FitBeta(pos, neg, id, tc);
    FAIL("expected NumericalError");
  } catch (const NumericalError &e) {
    CHECK(e.gradient_norm() > tc.tolerance);
    CHECK(std::string(e.what()).find("gradient norm") != std::string::npos);
  }
  try {
    auto m = FitBeta(pos, neg, id, {});
    CHECK(m.slope > 5.0);
  } catch (const NumericalError &e) {
    CHECK(e.gradient_norm() > 0.0);
  }
}

TEST_CASE("logreg errors") {
  std::vector<double> empty, one{1.0}, ones(5, 1.0);
  CHECK_THROWS_AS(FitLogReg(empty, one, {}), DataError);
  CHECK_THROWS_AS(FitLogReg(ones, ones, {}), DataError);
  TrainConfig bad;
  bad.effective_prior = 1.0;
  CHECK_THROWS_AS(FitLogReg(one, std::vector<double>{0.0}, bad), DataError);
  bad = {};
  bad.max_iters = 0;
  CHECK_THROWS_AS(FitLogReg(one, std::vector<double>{0.0}, bad), DataError);

  std::mt19937_64 rng(23);
  auto pos = oracle::Normal(rng, 100, 1.0, 1.0);
  auto neg = oracle::Normal(rng, 100, -1.0, 1.0);
  TrainConfig capped;
  capped.max_iters = 1;
  try {
    FitLogReg(pos, neg, capped);
    FAIL("expected NumericalError");
  } catch (const NumericalError &e) {
    CHECK(e.gradient_norm() > capped.tolerance);
  }
}

TEST_CASE("property: logreg matches the reference solver") {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int rep = 0; rep < 6; ++rep) {
    auto pos = oracle::Normal(rng, 300 + rep * 50, u(rng), u(rng));
    auto neg = oracle::Normal(rng, 400, -u(rng), u(rng));
    const double prior = rep % 2 ? 0.5 : 0.2;
    TrainConfig tc;
    tc.effective_prior = prior;
    auto fit = FitLogRegDetailed(pos, neg, tc);
    auto ref = RefLogReg(pos, neg, prior);
    CHECK(fit.model.slope == doctest::Approx(ref.w).epsilon(1e-5));
    CHECK(fit.model.offset == doctest::Approx(ref.b).epsilon(1e-5).scale(1.0));
    CHECK(fit.gradient_norm <= tc.tolerance);
    for (std::size_t i = 1; i < fit.objective_history.size(); ++i)
      CHECK(fit.objective_history[i] <= fit.objective_history[i - 1]);
  }
}

TEST_CASE("empirical prior mode weights classes by their counts") {
  std::mt19937_64 rng(25);
  auto pos = oracle::Normal(rng, 200, 1.0, 1.0);
  auto neg = oracle::Normal(rng, 800, -1.0, 1.0);
  TrainConfig tc;
  tc.effective_prior = std::nullopt;
  auto m = FitLogReg(pos, neg, tc);
  auto ref = RefLogReg(pos, neg, 0.2);
  CHECK(m.slope == doctest::Approx(ref.w).epsilon(1e-5));
  CHECK(m.offset == doctest::Approx(ref.b).epsilon(1e-5).scale(1.0));
}

TEST_CASE("beta on calibrated posteriors is near identity") {
  std::mt19937_64 rng(26);
  auto pos = oracle::Normal(rng, 50000, 1.0, std::sqrt(2.0));
  auto neg = oracle::Normal(rng, 50000, -1.0, std::sqrt(2.0));
  // Shared variance 2 and means +-1: the true LLR equals the score itself.
  auto m = FitBeta(Sig(pos), Sig(neg), {ScalingKind::kIdentity}, {});
  CHECK(m.kind == CalibratorKind::kBeta);
  CHECK(m.slope == doctest::Approx(1.0).epsilon(0.05));
  CHECK(std::abs(m.offset) < 0.05);
}

TEST_CASE("property: beta equals logreg on the log-odds feature") {
  std::mt19937_64 rng(27);
  std::uniform_real_distribution<double> u(-0.99, 0.99);
  for (auto kind : {ScalingKind::kCosineAffine, ScalingKind::kLogistic}) {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<double> pos(100), neg(120);
      for (double &x : pos) x = std::tanh(u(rng) + 0.5);
      for (double &x : neg) x = std::tanh(u(rng) - 0.5);
      const ScoreScaling sc{kind};
      std::vector<double> fp, fn;
      for (double x : pos) fp.push_back(sc.LogOdds(x));
      for (double x : neg) fn.push_back(sc.LogOdds(x));
      auto beta = FitBeta(pos, neg, sc, {});
      auto lr = FitLogReg(fp, fn, {});
      CHECK(beta.slope == lr.slope);
      CHECK(beta.offset == lr.offset);
    }
  }
}

TEST_CASE("property: calibration preserves order and metric order statistics") {
  std::mt19937_64 rng(28);
  for (int rep = 0; rep < 20; ++rep) {
    auto pos = oracle::Normal(rng, 150, 0.4, 0.3);
    auto neg = oracle::Normal(rng, 200, -0.4, 0.3);
    for (double &x : pos) x = std::tanh(x);
    for (double &x : neg) x = std::tanh(x);
    const BinaryScores raw{pos, neg};
    for (const auto &m : {FitLogReg(pos, neg, {}), FitBeta(pos, neg, {}, {})}) {
      REQUIRE(m.slope > 0.0);
      const BinaryScores cal{ApplyCalibration(m, pos), ApplyCalibration(m, neg)};
      CHECK(Eer(cal) == Eer(raw));
      CHECK(MinDcf(cal, {}).value == MinDcf(raw, {}).value);
      std::vector<double> sorted = pos;
      std::sort(sorted.begin(), sorted.end());
      auto out = ApplyCalibration(m, sorted);
      CHECK(std::is_sorted(out.begin(), out.end()));
    }
  }
}

TEST_CASE("PAV structure") {
  auto two = PavLlr(std::vector<double>{2.0}, std::vector<double>{1.0});
  const double lo = std::log(1e-6) - std::log1p(-1e-6);
  CHECK(two.knots() == std::vector<double>{1.0, 2.0});
  CHECK(two.Apply(0.0) == lo);
  CHECK(two.Apply(1.5) == lo);
  CHECK(two.Apply(2.0) == doctest::Approx(-lo).epsilon(1e-9));
  CHECK(two.Apply(9.0) == two.Apply(2.0));

  auto flat = PavLlr(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0, 1.0});
  CHECK(flat.llrs() == std::vector<double>{0.0});
  auto flat2 = PavLlr(std::vector<double>{1.0, 2.0}, std::vector<double>{2.0, 1.0});
  for (double x : {0.0, 1.0, 1.5, 2.0, 3.0}) CHECK(flat2.Apply(x) == 0.0);

  CHECK_THROWS_AS(PavLlr(std::vector<double>{}, std::vector<double>{1.0}), DataError);
  CHECK_THROWS_AS(PavCalibrator({1.0}, {}), DataError);
}

TEST_CASE("property: PAV output is monotone and beats fitted calibrators") {
  std::mt19937_64 rng(29);
  for (int rep = 0; rep < 25; ++rep) {
    auto pos = oracle::Normal(rng, 200, 0.3, 0.4);
    auto neg = oracle::Normal(rng, 300, -0.3, 0.4);
    for (double &x : pos) x = std::tanh(x);
    for (double &x : neg) x = std::tanh(x);
    auto pav = PavLlr(pos, neg);
    CHECK(std::is_sorted(pav.llrs().begin(), pav.llrs().end()));
    const double c_pav = Cllr({pav.Apply(pos), pav.Apply(neg)});
    for (const auto &m : {FitLogReg(pos, neg, {}), FitBeta(pos, neg, {}, {}),
                          FitBeta(pos, neg, {ScalingKind::kLogistic}, {})}) {
      const double c_fit = Cllr({ApplyCalibration(m, pos), ApplyCalibration(m, neg)});
      CHECK(c_pav <= c_fit + 1e-12);
    }
    // PAV of already-PAV'd LLRs cannot improve further.
    const double raw = Cllr({pos, neg});
    CHECK(c_pav <= raw + 1e-12);
  }
}

TEST_CASE("model JSON round-trips exactly") {
  std::mt19937_64 rng(30);
  std::normal_distribution<double> nd(0.0, 5.0);
  for (int rep = 0; rep < 100; ++rep) {
    CalibrationModel m;
    m.slope = std::abs(nd(rng));
    m.offset = nd(rng);
    if (rep % 2) {
      m.kind = CalibratorKind::kBeta;
      m.scaling = ScoreScaling{static_cast<ScalingKind>(rep % 3), 1e-6 * (1 + rep % 4)};
    }
    const std::string text = ModelToJson(m);
    CHECK(ModelFromJson(text) == m);
    CHECK(ModelToJson(ModelFromJson(text)) == text);
  }
  CHECK_THROWS_AS(ModelFromJson("{"), DataError);
  CHECK_THROWS_AS(ModelFromJson(R"({"kind":"svm","scaling":null,"slope":1,"offset":0})"),
                  DataError);
  CHECK_THROWS_AS(ModelFromJson(R"({"kind":"logreg","scaling":null,"slope":-1,"offset":0})"),
                  DataError);
  CHECK_THROWS_AS(ModelFromJson(R"({"kind":"logreg"})"), DataError);
}
