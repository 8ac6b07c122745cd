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

#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sasv/errors.hpp"
#include "sasv/fusion.hpp"

using namespace sasv;

namespace {

long double LseLong(double cm, double asv, double p) {
  return -std::log(static_cast<long double>(p) * std::exp(-static_cast<long double>(asv)) +
                   (1.0L - p) * std::exp(-static_cast<long double>(cm)));
}

}  // namespace

TEST_CASE("enrollment averaging") {
  std::vector<Embedding> one{{{1.0, 2.0}}};
  CHECK(EnrollAverage(one) == one[0]);
  std::vector<Embedding> two{{{1.0, 0.0}}, {{0.0, 1.0}}};
  CHECK(EnrollAverage(two).values == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(EnrollAverage(std::vector<Embedding>{}), DataError);
  std::vector<Embedding> mixed{{{1.0, 0.0}}, {{0.0, 1.0, 2.0}}};
  CHECK_THROWS_AS(EnrollAverage(mixed), DataError);
}

TEST_CASE("cosine scoring") {
  Embedding e{{0.3, -1.2, 2.5}};
  Embedding neg{{-0.3, 1.2, -2.5}};
  CHECK(CosineScore(e, e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(CosineScore(e, neg) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(CosineScore({{1.0, 0.0}}, {{0.0, 1.0}}) == 0.0);
  CHECK_THROWS_AS(CosineScore({{0.0, 0.0}}, {{0.0, 1.0}}), DataError);
  CHECK_THROWS_AS(CosineScore({{1.0}}, {{0.0, 1.0}}), DataError);

  std::mt19937_64 rng(41);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    Embedding a{{nd(rng), nd(rng), nd(rng)}};
    const double s = CosineScore(a, a);
    CHECK(s <= 1.0);
    CHECK(s >= -1.0);
  }
}

TEST_CASE("linear fusion") {
  std::vector<double> s{1.0, 3.0};
  CHECK(LinearFuse(s, {{0.5, 0.5}}) == 2.0);
  CHECK(LinearFuse(s, {{1.0, 0.0}}) == 1.0);
  std::vector<double> eq{0.7, 0.7, 0.7};
  CHECK(LinearFuse(eq, {{0.25, 0.25, 0.5}}) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK_THROWS_AS(LinearFuse(s, {{1.0}}), DataError);
  CHECK_THROWS_AS(LinearFuse(s, {{0.0, 0.0}}), DataError);
}

TEST_CASE("LSE fusion examples") {
  CHECK(LseFuse(-3.0, 1.25, {1.0}) == 1.25);
  CHECK(LseFuse(-3.0, 1.25, {0.0}) == -3.0);
  for (double p : {0.0, 0.1, 0.5, 0.7, 1.0}) CHECK(LseFuse(2.0, 2.0, {p}) == 2.0);
  CHECK(std::abs(LseFuse(0.0, 4.0, {0.5}) - 0.6749972526421355) < 1e-14);
  CHECK_THROWS_AS(LseFuse(0.0, 0.0, {1.5}), DataError);
  CHECK_THROWS_AS(LseFuse(0.0, 0.0, {-0.1}), DataError);
  CHECK(std::isfinite(LseFuse(700.0, -700.0, {0.5})));
  CHECK(std::isfinite(LseFuse(-700.0, -700.0, {0.3})));
  CHECK(std::isfinite(LseFuse(-700.0, 700.0, {1e-300})));
}

TEST_CASE("property: LSE bounds, identities and extended-precision agreement") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> llr(-700.0, 700.0);
  std::uniform_real_distribution<double> small(-20.0, 20.0);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  for (int rep = 0; rep < 10000; ++rep) {
    const bool wide = rep % 2;
    const double x = wide ? llr(rng) : small(rng);  // asv
    const double y = wide ? llr(rng) : small(rng);  // cm
    const double p = up(rng);
    const double f = LseFuse(y, x, {p});
    REQUIRE(std::isfinite(f));
    CHECK(f >= std::min(x, y));
    CHECK(f <= std::min(x - std::log(p), y - std::log1p(-p)));
    CHECK(LseFuse(x, x, {p}) == x);
    CHECK(LseFuse(y, x, {1.0}) == x);
    if (!wide) {
      const double ref = static_cast<double>(LseLong(y, x, p));
      CHECK(std::abs(f - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("property: LSE is non-decreasing in each input") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::uniform_real_distribution<double> up(0.01, 0.99);
  for (int rep = 0; rep < 2000; ++rep) {
    const double a = u(rng), b = u(rng), d = std::abs(u(rng)), p = up(rng);
    CHECK(LseFuse(a + d, b, {p}) >= LseFuse(a, b, {p}));
    CHECK(LseFuse(a, b + d, {p}) >= LseFuse(a, b, {p}));
  }
}

TEST_CASE("weight grid") {
  auto g = WeightGrid::Parse("0:1:0.25");
  CHECK(g.Points() == std::vector<double>{0, 0.25, 0.5, 0.75, 1});
  CHECK(WeightGrid{}.Points().size() == 21);
  CHECK(WeightGrid{}.Points()[7] == 0.35);
  CHECK_THROWS_AS(WeightGrid::Parse("0:1"), DataError);
  CHECK_THROWS_AS(WeightGrid::Parse("0:x:0.1"), DataError);
  CHECK_THROWS_AS((WeightGrid{0, 1, 0}.Points()), DataError);
  CHECK_THROWS_AS((WeightGrid{1, 0, 0.1}.Points()), DataError);
}

TEST_CASE("grid search on a synthetic objective") {
  std::vector<double> grid{0.0, 0.5, 1.0};
  auto r = GridSearchWeight(grid, [](double p) { return std::abs(p - 0.5); });
  CHECK(r.best_p == 0.5);
  CHECK(r.best_objective == 0.0);
  CHECK(r.table.size() == 3);

  auto tie = GridSearchWeight(std::vector<double>{1.0, 0.2, 0.6, 0.2},
                              [](double) { return 1.0; });
  CHECK(tie.best_p == 0.2);
  CHECK(tie.table.size() == 3);
  CHECK(tie.table.front().p == 0.2);

  CHECK_THROWS_AS(GridSearchWeight(std::vector<double>{}, [](double) { return 0.0; }),
                  DataError);
  CHECK_THROWS_AS(GridSearchWeight(std::vector<double>{1.5}, [](double) { return 0.0; }),
                  DataError);
}

TEST_CASE("grid search with an uninformative CM favors the ASV weight") {
  // ASV LLRs calibrated for target N(1,2) against nontarget and spoof, both
  // N(-1,2); every CM LLR is zero. The ASV LLR alone is then the Bayes
  // decision statistic, which only p = 1 reproduces exactly. Scores sit at
  // evenly spaced quantiles so empirical rates track the population ones.
  PairedSasvScores llrs;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = (i + 0.5) / n;
    double lo = -10.0, hi = 10.0;  // invert the normal CDF by bisection
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < u ? lo : hi) = mid;
    }
    const double z = std::sqrt(2.0) * 0.5 * (lo + hi);
    llrs.target.push_back({z + 1.0, 0.0});
    llrs.nontarget.push_back({z - 1.0, 0.0});
    llrs.spoof.push_back({z - 1.0, 0.0});
  }
  CostModel cost{1, 10, 10, 0.95, 0.025, 0.025};
  const auto grid = WeightGrid{}.Points();
  auto r = GridSearchWeight(llrs, SweepObjective::kActADcf, cost, grid);

  // Exhaustive oracle: fuse with the extended-precision formula and count.
  const double tau = std::log(0.25 + 0.25) - std::log(0.95);
  double best_obj = oracle::kInf, best_p = -1;
  for (double p : grid) {
    auto rate = [&](const std::vector<PairedScore> &v, bool accept) {
      std::size_t n = 0;
      for (const auto &t : v) n += (static_cast<double>(LseLong(t.cm, t.asv, p)) >= tau) == accept;
      return static_cast<double>(n) / static_cast<double>(v.size());
    };
    const double obj = (0.95 * rate(llrs.target, false) + 0.25 * rate(llrs.nontarget, true) +
                        0.25 * rate(llrs.spoof, true)) /
                       0.5;
    if (obj < best_obj) {
      best_obj = obj;
      best_p = p;
    }
  }
  CHECK(best_p == 1.0);
  CHECK(r.best_p == best_p);
  CHECK(r.best_objective == doctest::Approx(best_obj).epsilon(1e-12));
  CHECK(r.objective == "act_a_dcf");

  // Under min a-DCF every p > 0 induces the same ordering of fused scores,
  // so all those grid points tie and the smallest one wins.
  auto m = GridSearchWeight(llrs, SweepObjective::kMinADcf, cost, grid);
  for (std::size_t i = 2; i < m.table.size(); ++i)
    CHECK(m.table[i].objective == m.table[1].objective);
  CHECK(m.best_p <= 0.05);
}

TEST_CASE("embedding parsing") {
  std::istringstream ok("# comment\nu1 1 2 3\nu2 0.5 0 -1\n");
  auto e = ParseEmbeddings(ok);
  REQUIRE(e.size() == 2);
  CHECK(e[1].embedding.values == std::vector<double>{0.5, 0, -1});
  std::istringstream bad_dim("u1 1 2\nu2 1\n");
  CHECK_THROWS_AS(ParseEmbeddings(bad_dim), ParseError);
  std::istringstream dup("u1 1\nu1 2\n");
  CHECK_THROWS_AS(ParseEmbeddings(dup), ParseError);
  std::istringstream nan("u1 nan\n");
  CHECK_THROWS_AS(ParseEmbeddings(nan), ParseError);
}
