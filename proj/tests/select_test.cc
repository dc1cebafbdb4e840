// Copyright 2026 The dpgmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpgmm/select.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dpgmm/mech.h"
#include "dpgmm/tvdist.h"
#include "gtest/gtest.h"
#include "oracle_values.h"

namespace dpgmm {
namespace {

Mixture Uni(double mean, double var) {
  return Mixture::Single(GaussianParams::Univariate(mean, var).value());
}

bool In(const Mixture& a, const Mixture& b, double x) {
  const double p[] = {x};
  return ScheffeMembership(a, b, p).value();
}

TEST(ScheffeMembershipTest, Examples) {
  for (double x : {-3.0, 0.0, 7.0}) EXPECT_FALSE(In(Uni(0, 1), Uni(0, 1), x));
  EXPECT_TRUE(In(Uni(0, 1), Uni(2, 1), 0.0));
  EXPECT_FALSE(In(Uni(0, 1), Uni(2, 1), 2.0));
  EXPECT_TRUE(In(Uni(0, 1), Uni(0, 4), 0.0));
  EXPECT_FALSE(In(Uni(0, 1), Uni(0, 4), 5.0));
}

TEST(ScheffeIntervalsTest, MatchesMembership) {
  const Mixture a =
      Mixture::Create({{0.3, GaussianParams::Univariate(-2, 0.5).value()},
                       {0.7, GaussianParams::Univariate(3, 2).value()}})
          .value();
  const Mixture b = Uni(0.5, 4);
  const auto intervals = ScheffeIntervals(a, b).value();
  for (double x = -15; x <= 15; x += 0.01) {
    bool inside = false;
    for (const auto& [lo, hi] : intervals) inside |= x > lo && x < hi;
    bool near_edge = false;
    for (const auto& [lo, hi] : intervals) {
      near_edge |= std::abs(x - lo) < 1e-6 || std::abs(x - hi) < 1e-6;
    }
    if (!near_edge) EXPECT_EQ(inside, In(a, b, x)) << x;
  }
}

TEST(ScheffeIntervalsTest, RandomPairsMatchDenseScan) {
  Rng rng(17);
  std::uniform_real_distribution<double> mean(-5.0, 5.0);
  std::uniform_real_distribution<double> log_var(std::log(0.05), std::log(5.0));
  std::uniform_int_distribution<int> comps(1, 3);
  const auto random_mixture = [&] {
    std::vector<WeightedComponent> c;
    const int m = comps(rng);
    for (int i = 0; i < m; ++i) {
      c.push_back({1.0 / m, GaussianParams::Univariate(
                                mean(rng), std::exp(log_var(rng)))
                                .value()});
    }
    return Mixture::Create(c).value();
  };
  for (int trial = 0; trial < 200; ++trial) {
    const Mixture a = random_mixture();
    const Mixture b = random_mixture();
    const auto intervals = ScheffeIntervals(a, b).value();
    for (double x = -60; x <= 60; x += 0.01) {
      bool inside = false;
      bool near_edge = false;
      for (const auto& [lo, hi] : intervals) {
        inside |= x > lo && x < hi;
        near_edge |= std::abs(x - lo) < 1e-6 || std::abs(x - hi) < 1e-6;
      }
      if (!near_edge) {
        ASSERT_EQ(inside, In(a, b, x)) << "trial " << trial << " x " << x;
      }
    }
  }
}

TEST(ScheffeMassTest, Examples) {
  const ScheffeSpec spec;
  EXPECT_EQ(ScheffeMass(Uni(0, 1), Uni(0, 1), Uni(3, 2), spec).value().mass,
            0.0);
  EXPECT_NEAR(ScheffeMass(Uni(0, 1), Uni(2, 1), Uni(0, 1), spec).value().mass,
              oracle::kPhiOne, 1e-4);
  EXPECT_NEAR(ScheffeMass(Uni(0, 1), Uni(2, 1), Uni(2, 1), spec).value().mass,
              1 - oracle::kPhiOne, 1e-4);
}

TEST(ScheffeMassTest, MonteCarloAgrees) {
  ScheffeSpec spec;
  spec.force_monte_carlo = true;
  spec.mc_samples = 200000;
  spec.seed = 3;
  const ScheffeEstimate e =
      ScheffeMass(Uni(0, 1), Uni(2, 1), Uni(0, 1), spec).value();
  EXPECT_EQ(e.method, ScheffeMethod::kMonteCarlo);
  ASSERT_TRUE(e.mc_stderr.has_value());
  EXPECT_NEAR(e.mass, oracle::kPhiOne, 4 * *e.mc_stderr);
}

TEST(ScheffeMassTest, EmpiricalFraction) {
  const Dataset data = Dataset::FromColumn({-1, 0.5, 0.99, 1.5, 3}).value();
  const ScheffeEstimate e =
      ScheffeMass(Uni(0, 1), Uni(2, 1), Uni(0, 1), {}, &data).value();
  EXPECT_DOUBLE_EQ(e.empirical, 3.0 / 5.0);
}

TEST(MdeScoresTest, TrueHypothesisScoresLow) {
  const std::vector<Mixture> h = {Uni(0, 1), Uni(0.5, 1), Uni(0, 3)};
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset data = Sample(h[0], 10000, seed).value();
    const std::vector<double> s = MdeScores(h, data).value();
    EXPECT_LE(s[0], 0.05);
    EXPECT_EQ(std::min_element(s.begin(), s.end()) - s.begin(), 0);
  }
}

TEST(MdeScoresTest, DuplicateHypothesesContributeNothing) {
  const std::vector<Mixture> one = {Uni(0, 1), Uni(3, 1)};
  const std::vector<Mixture> dup = {Uni(0, 1), Uni(0, 1), Uni(3, 1)};
  const Dataset data = Sample(one[0], 2000, 1).value();
  const std::vector<double> a = MdeScores(one, data).value();
  const std::vector<double> b = MdeScores(dup, data).value();
  EXPECT_NEAR(a[0], b[0], 1e-12);
  EXPECT_NEAR(a[0], b[1], 1e-12);
  EXPECT_NEAR(a[1], b[2], 1e-12);
}

TEST(MdeScoresTest, OnePointChangesScoresByAtMostOneOverN) {
  const std::vector<Mixture> h = {Uni(0, 1), Uni(1, 2), Uni(-1, 0.5)};
  Dataset data = Sample(h[0], 500, 2).value();
  std::vector<double> v = data.values();
  const std::vector<double> before = MdeScores(h, data).value();
  v[17] = 40.0;
  const std::vector<double> after =
      MdeScores(h, Dataset::FromColumn(v).value()).value();
  for (size_t i = 0; i < h.size(); ++i) {
    EXPECT_LE(std::abs(before[i] - after[i]), 1.0 / 500 + 1e-12);
  }
}

TEST(MdeScoresTest, BivariateMonteCarlo) {
  Eigen::MatrixXd wide = 4 * Eigen::MatrixXd::Identity(2, 2);
  const std::vector<Mixture> h = {
      Mixture::Single(GaussianParams::StandardNormal(2)),
      Mixture::Single(
          GaussianParams::Create(Eigen::VectorXd::Zero(2), wide).value())};
  const Dataset data = Sample(h[0], 5000, 3).value();
  MdeOptions opt;
  opt.mc_samples = 20000;
  const std::vector<double> s = MdeScores(h, data, opt).value();
  EXPECT_LT(s[0], s[1]);
}

TEST(PrivateSelectTest, SingletonClass) {
  const std::vector<Mixture> h = {Uni(0, 1)};
  const Dataset data = Sample(h[0], 100, 1).value();
  Rng rng(1);
  EXPECT_EQ(PrivateSelect(h, data, 1.0, rng).value().chosen, 0u);
}

TEST(PrivateSelectTest, HugeEpsilonPicksArgmin) {
  const std::vector<Mixture> h = {Uni(1, 1), Uni(0, 1), Uni(0, 2), Uni(-1, 1)};
  const Dataset data = Sample(h[1], 2000, 2).value();
  const std::vector<double> s = MdeScores(h, data).value();
  const size_t best = std::min_element(s.begin(), s.end()) - s.begin();
  Rng rng(5);
  for (int t = 0; t < 100; ++t) {
    EXPECT_EQ(PrivateSelect(h, data, 1e6, rng).value().chosen, best);
  }
}

TEST(PrivateSelectTest, RejectsBadInput) {
  const std::vector<Mixture> h = {Uni(0, 1)};
  const Dataset data = Sample(h[0], 100, 1).value();
  Rng rng(1);
  EXPECT_FALSE(PrivateSelect({}, data, 1.0, rng).ok());
  EXPECT_FALSE(PrivateSelect(h, data, 0.0, rng).ok());
}

TEST(SelectionReportTest, Json) {
  const SelectionReport r{1, {0.3, 0.1}, 1.0, 50};
  const nlohmann::json j = SelectionReportToJson(r);
  EXPECT_EQ(j["chosen"], 1);
  EXPECT_EQ(j["scores"].size(), 2u);
}

}  // namespace
}  // namespace dpgmm
