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

#include "dpgmm/model.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracle_values.h"

namespace dpgmm {
namespace {

GaussianParams Uni(double mean, double var) {
  return GaussianParams::Univariate(mean, var).value();
}

TEST(GaussianParamsTest, RejectsNonSpdCovariance) {
  EXPECT_FALSE(GaussianParams::Univariate(0.0, 0.0).ok());
  EXPECT_FALSE(GaussianParams::Univariate(0.0, -1.0).ok());
  Eigen::MatrixXd asym(2, 2);
  asym << 1, 0.5, 0, 1;
  EXPECT_FALSE(GaussianParams::Create(Eigen::VectorXd::Zero(2), asym).ok());
  EXPECT_FALSE(GaussianParams::Create(Eigen::VectorXd::Zero(3),
                                      Eigen::MatrixXd::Identity(2, 2))
                   .ok());
}

TEST(MixtureTest, RejectsBadWeights) {
  EXPECT_FALSE(Mixture::Create({{0.5, Uni(0, 1)}, {0.6, Uni(1, 1)}}).ok());
  EXPECT_FALSE(Mixture::Create({{-0.1, Uni(0, 1)}, {1.1, Uni(1, 1)}}).ok());
  EXPECT_FALSE(Mixture::Create({}).ok());
}

TEST(MixtureTest, DensityAtModeOfStandardNormal) {
  const Mixture m = Mixture::Single(Uni(0, 1));
  EXPECT_NEAR(m.Density1(0.0), oracle::kStdNormalPdfAtZero, 1e-15);
}

TEST(MixtureTest, IdenticalComponentsCollapse) {
  const Mixture m =
      Mixture::Create({{0.5, Uni(0, 1)}, {0.5, Uni(0, 1)}}).value();
  EXPECT_NEAR(m.Density1(0.0), oracle::kStdNormalPdfAtZero, 1e-15);
}

TEST(MixtureTest, TwoComponentDensity) {
  const Mixture m =
      Mixture::Create({{0.3, Uni(0, 1)}, {0.7, Uni(4, 4)}}).value();
  EXPECT_NEAR(m.Density1(2.0), oracle::kMixturePdfAtTwo, 1e-14);
  const double x[] = {2.0};
  EXPECT_NEAR(Density(m, x).value(), oracle::kMixturePdfAtTwo, 1e-14);
}

TEST(MixtureTest, CheckedDensityRejectsWrongDimension) {
  const Mixture m = Mixture::Single(GaussianParams::StandardNormal(2));
  const double x[] = {0.0};
  EXPECT_FALSE(Density(m, x).ok());
}

TEST(MixtureTest, MultivariateDensityMatchesProductOfMarginals) {
  const Mixture m = Mixture::Single(GaussianParams::StandardNormal(3));
  const double x[] = {0.3, -1.2, 2.0};
  double expected = 1.0;
  for (double v : x) expected *= Uni(0, 1).Density1(v);
  EXPECT_NEAR(m.Density(x), expected, 1e-15);
}

TEST(SampleTest, StandardNormalMoments) {
  for (uint64_t seed : {1u, 2u, 3u}) {
    const Dataset data =
        Sample(Mixture::Single(Uni(0, 1)), 100000, seed).value();
    double mean = 0.0;
    for (double v : data.values()) mean += v;
    mean /= data.n();
    double var = 0.0;
    for (double v : data.values()) var += (v - mean) * (v - mean);
    var /= data.n() - 1;
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_NEAR(var, 1.0, 0.03);
  }
}

TEST(SampleTest, ZeroWeightComponentNeverSampled) {
  const Mixture m =
      Mixture::Create({{1.0, Uni(0, 1)}, {0.0, Uni(1000, 1)}}).value();
  const Dataset data = Sample(m, 20000, 5).value();
  for (double v : data.values()) EXPECT_LT(v, 100.0);
}

TEST(SampleTest, Deterministic) {
  const Mixture m =
      Mixture::Create({{0.3, Uni(0, 1)}, {0.7, Uni(4, 4)}}).value();
  EXPECT_EQ(Sample(m, 1000, 9).value(), Sample(m, 1000, 9).value());
  EXPECT_NE(Sample(m, 1000, 9).value(), Sample(m, 1000, 10).value());
}

TEST(SampleTest, MultivariateCovariance) {
  Eigen::MatrixXd cov(2, 2);
  cov << 2.0, 0.8, 0.8, 1.0;
  const Mixture m = Mixture::Single(
      GaussianParams::Create(Eigen::Vector2d(1.0, -1.0), cov).value());
  const Dataset data = Sample(m, 200000, 4).value();
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  for (int64_t i = 0; i < data.n(); ++i) {
    mean += Eigen::Vector2d(data.row(i)[0], data.row(i)[1]);
  }
  mean /= data.n();
  Eigen::Matrix2d emp = Eigen::Matrix2d::Zero();
  for (int64_t i = 0; i < data.n(); ++i) {
    const Eigen::Vector2d c =
        Eigen::Vector2d(data.row(i)[0], data.row(i)[1]) - mean;
    emp += c * c.transpose();
  }
  emp /= data.n() - 1;
  EXPECT_NEAR(mean(0), 1.0, 0.02);
  EXPECT_NEAR(mean(1), -1.0, 0.02);
  EXPECT_NEAR(emp(0, 0), 2.0, 0.04);
  EXPECT_NEAR(emp(0, 1), 0.8, 0.03);
  EXPECT_NEAR(emp(1, 1), 1.0, 0.02);
}

TEST(DatasetTest, SliceAndValidation) {
  const Dataset d = Dataset::FromColumn({1, 2, 3, 4}).value();
  const Dataset s = d.Slice(1, 3).value();
  EXPECT_EQ(s.n(), 2);
  EXPECT_EQ(s.values(), (std::vector<double>{2, 3}));
  EXPECT_FALSE(d.Slice(3, 5).ok());
  EXPECT_FALSE(Dataset::Create(2, 2, {1, 2, 3}).ok());
}

TEST(TvUpperBoundTest, Examples) {
  const GaussianParams z = GaussianParams::StandardNormal(3);
  EXPECT_EQ(TvUpperBound(z, z).value(), 0.0);
  EXPECT_NEAR(TvUpperBound(Uni(0, 1), Uni(1, 1)).value(),
              oracle::kTvUpperUnitShift, 1e-12);
  EXPECT_NEAR(TvUpperBound(Uni(0, 1), Uni(0, 2)).value(),
              oracle::kTvUpperUnitShift, 1e-12);
  EXPECT_FALSE(TvUpperBound(Uni(0, 1), z).ok());
}

TEST(NormalCdfTest, KnownValues) {
  EXPECT_DOUBLE_EQ(NormalCdf(0.0), 0.5);
  EXPECT_NEAR(NormalCdf(1.0), oracle::kPhiOne, 1e-15);
  EXPECT_NEAR(NormalCdf(-1.0), 1.0 - oracle::kPhiOne, 1e-15);
}

}  // namespace
}  // namespace dpgmm
