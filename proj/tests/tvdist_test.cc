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

#include "dpgmm/tvdist.h"

#include <cmath>
#include <random>

#include "dpgmm/mech.h"
#include "gtest/gtest.h"
#include "oracle_values.h"

namespace dpgmm {
namespace {

GaussianParams Uni(double mean, double var) {
  return GaussianParams::Univariate(mean, var).value();
}

Mixture Two(double w, GaussianParams a, GaussianParams b) {
  return Mixture::Create({{w, std::move(a)}, {1 - w, std::move(b)}}).value();
}

TEST(AdaptiveSimpsonTest, Polynomials) {
  EXPECT_NEAR(AdaptiveSimpson([](double x) { return x * x * x; }, 0, 2, 1e-12),
              4.0, 1e-12);
  EXPECT_NEAR(
      AdaptiveSimpson([](double x) { return std::exp(-x * x); }, -10, 10,
                      1e-12),
      std::sqrt(M_PI), 1e-10);
}

TEST(AdaptiveSimpsonTest, SeedsCatchNarrowSpikes) {
  const auto spike = [](double x) {
    return std::exp(-0.5 * (x - 3.3) * (x - 3.3) / 1e-8) /
           std::sqrt(2 * M_PI * 1e-8);
  };
  EXPECT_NEAR(AdaptiveSimpson(spike, -100, 100, 1e-9, {3.3}), 1.0, 1e-6);
}

TEST(TvUnivariateTest, IdenticalIsZero) {
  const Mixture m = Two(0.3, Uni(0, 1), Uni(5, 2));
  const TVEstimate e = TvUnivariate(m, m).value();
  EXPECT_NEAR(e.value, 0.0, e.error_bound);
  EXPECT_EQ(e.method, TvMethod::kQuadrature);
}

TEST(TvUnivariateTest, UnitShift) {
  const TVEstimate e = TvUnivariate(Mixture::Single(Uni(0, 1)),
                                    Mixture::Single(Uni(1, 1)))
                           .value();
  EXPECT_NEAR(e.value, oracle::kTvUnitShift, 1e-6);
}

TEST(TvUnivariateTest, FarMixture) {
  const TVEstimate e =
      TvUnivariate(Mixture::Single(Uni(0, 1)), Two(0.5, Uni(-10, 1), Uni(10, 1)))
          .value();
  EXPECT_NEAR(e.value, oracle::kTvFarMixture, 1e-6);
}

TEST(TvUnivariateTest, VeryDifferentScales) {
  // A narrow spike inside a wide bump: TV is close to 1 - (tiny overlap).
  const Mixture wide = Mixture::Single(Uni(0, 1e6));
  const Mixture narrow = Mixture::Single(Uni(0, 1e-6));
  EXPECT_NEAR(TvUnivariate(wide, narrow).value().value, 1.0, 1e-5);
}

TEST(TvUnivariateTest, SymmetricAndBounded) {
  Rng rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int t = 0; t < 50; ++t) {
    const Mixture a = Two(0.4, Uni(u(rng), std::exp(u(rng) / 3)),
                          Uni(u(rng), std::exp(u(rng) / 3)));
    const Mixture b = Mixture::Single(Uni(u(rng), std::exp(u(rng) / 3)));
    const double ab = TvUnivariate(a, b).value().value;
    EXPECT_NEAR(ab, TvUnivariate(b, a).value().value, 1e-5);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(TvUnivariateTest, RejectsMultivariate) {
  const Mixture m = Mixture::Single(GaussianParams::StandardNormal(2));
  EXPECT_EQ(TvUnivariate(m, m).status().code(),
            absl::StatusCode::kUnimplemented);
}

TEST(TvMonteCarloTest, IdenticalBivariateIsZero) {
  const Mixture m = Mixture::Single(GaussianParams::StandardNormal(2));
  const TVEstimate e = TvMonteCarlo(m, m, 20000, 1).value();
  EXPECT_LE(std::abs(e.value), e.error_bound + 1e-15);
  EXPECT_EQ(e.method, TvMethod::kMonteCarlo);
}

TEST(TvMonteCarloTest, RadialOracle) {
  const Mixture a = Mixture::Single(GaussianParams::StandardNormal(2));
  const Mixture b = Mixture::Single(
      GaussianParams::Create(Eigen::VectorXd::Zero(2),
                             2 * Eigen::MatrixXd::Identity(2, 2))
          .value());
  const TVEstimate e = TvMonteCarlo(a, b, 200000, 2).value();
  EXPECT_NEAR(e.value, oracle::kTvRadialIdentityVsDouble, e.error_bound);
}

TEST(TvMonteCarloTest, AgreesWithQuadratureOnRandomPairs) {
  Rng rng(7);
  std::uniform_real_distribution<double> u(-3, 3);
  int disagreements = 0;
  for (int t = 0; t < 100; ++t) {
    const Mixture a = Two(0.5 + 0.1 * u(rng), Uni(u(rng), std::exp(u(rng) / 2)),
                          Uni(u(rng), std::exp(u(rng) / 2)));
    const Mixture b = Two(0.5 + 0.1 * u(rng), Uni(u(rng), std::exp(u(rng) / 2)),
                          Uni(u(rng), std::exp(u(rng) / 2)));
    const TVEstimate q = TvUnivariate(a, b).value();
    const TVEstimate m = TvMonteCarlo(a, b, 20000, DeriveSeed(7, t)).value();
    disagreements +=
        std::abs(q.value - m.value) > q.error_bound + m.error_bound;
  }
  // Each check is a 3-sigma band; allow the expected handful of misses.
  EXPECT_LE(disagreements, 3);
}

TEST(TvMonteCarloTest, Errors) {
  const Mixture a = Mixture::Single(GaussianParams::StandardNormal(1));
  const Mixture b = Mixture::Single(GaussianParams::StandardNormal(2));
  EXPECT_FALSE(TvMonteCarlo(a, b, 5000, 1).ok());
  EXPECT_FALSE(TvMonteCarlo(a, a, 10, 1).ok());
}

TEST(TailMassTest, TinyAtTwelveSigma) {
  EXPECT_LT(TailMassBound(Mixture::Single(Uni(0, 1))), 1e-30);
}

}  // namespace
}  // namespace dpgmm
