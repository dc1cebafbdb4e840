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

#include "dpgmm/geometry.h"

#include <cmath>

#include "dpgmm/audit.h"
#include "dpgmm/linalg.h"
#include "gtest/gtest.h"
#include "oracle_values.h"

namespace dpgmm {
namespace {

GaussianParams Uni(double mean, double var) {
  return GaussianParams::Univariate(mean, var).value();
}

TEST(ApproxCheckTest, Examples) {
  const GaussianParams base = Uni(0, 1);
  EXPECT_TRUE(ApproxCheck(base, base, {1e-9, 1e-9, 1e-9}).value());
  EXPECT_TRUE(ApproxCheck(Uni(0, 1.05), base, {0.05, 0.05, 0.01}).value());
  EXPECT_FALSE(ApproxCheck(Uni(0.2, 1), base, {0.1, 0.1, 0.1}).value());
  EXPECT_FALSE(ApproxParams::Create(0.1, -1, 0.1).ok());
  EXPECT_FALSE(
      ApproxCheck(GaussianParams::StandardNormal(2), base, {1, 1, 1}).ok());
}

TEST(ApproxDistancesTest, WhitenedFrame) {
  Eigen::MatrixXd cov(2, 2);
  cov << 4, 0, 0, 9;
  const GaussianParams base =
      GaussianParams::Create(Eigen::Vector2d(1, 1), cov).value();
  Eigen::MatrixXd hat_cov(2, 2);
  hat_cov << 4.4, 0, 0, 9;
  const GaussianParams hat =
      GaussianParams::Create(Eigen::Vector2d(3, 1), hat_cov).value();
  const ApproxDistances d = ComputeApproxDistances(hat, base).value();
  EXPECT_NEAR(d.spectral, 0.1, 1e-12);
  EXPECT_NEAR(d.frobenius, 0.1, 1e-12);
  EXPECT_NEAR(d.mahalanobis, 1.0, 1e-12);
}

TEST(AffinePushTest, Examples) {
  const GaussianParams g = GaussianParams::StandardNormal(3);
  EXPECT_TRUE(AffinePush(g, Eigen::VectorXd::Zero(3),
                         Eigen::MatrixXd::Identity(3, 3))
                  .value()
                  .cov()
                  .isApprox(Eigen::MatrixXd::Identity(3, 3)));
  const GaussianParams pushed =
      AffinePush(Uni(0, 1), Eigen::VectorXd::Constant(1, 5),
                 Eigen::MatrixXd::Constant(1, 1, 9))
          .value();
  EXPECT_DOUBLE_EQ(pushed.mean1(), 5.0);
  EXPECT_DOUBLE_EQ(pushed.variance1(), 9.0);
}

TEST(ApproxPropertyTest, PushInvariance) {
  const AuditLine line = AuditApproxPushInvariance(31, 1000);
  EXPECT_TRUE(line.passed) << line.detail;
}

TEST(ApproxPropertyTest, SymmetryAndTransitivityConstants) {
  const AuditLine line = AuditApproxMetric(37, 1000);
  EXPECT_TRUE(line.passed) << line.detail;
}

TEST(ProjTest, RoundTrip) {
  Rng rng(3);
  for (int d = 1; d <= 4; ++d) {
    const Eigen::MatrixXd s = RandomSpd(d, 0.5, 2.0, rng);
    const Eigen::VectorXd mu = Eigen::VectorXd::LinSpaced(d, -1, 1);
    const Eigen::VectorXd theta = Proj(mu, s);
    EXPECT_EQ(theta.size(), ProjDim(d));
    Eigen::VectorXd mu2;
    Eigen::MatrixXd s2;
    Unproj(theta, d, &mu2, &s2);
    EXPECT_TRUE(mu2.isApprox(mu));
    EXPECT_TRUE(s2.isApprox(s));
  }
}

TEST(NvolTest, ClosedForm) {
  ParamRegion box;
  box.d = 1;
  box.lo = Eigen::Vector2d(0, 1);
  box.hi = Eigen::Vector2d(1, 2);
  const McEstimate e = NvolMc(box, 200000, 5).value();
  EXPECT_NEAR(e.value, oracle::kNvolClosedForm, 3 * e.std_error);
}

TEST(NvolTest, EmptyRegionIsZero) {
  ParamRegion box;
  box.d = 1;
  box.lo = Eigen::Vector2d(0, 1);
  box.hi = Eigen::Vector2d(1, 2);
  box.contains = [](const GaussianParams&) { return false; };
  const McEstimate e = NvolMc(box, 10000, 5).value();
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
}

TEST(NvolTest, AffineInvariance) {
  const AuditLine line = AuditNvolInvariance(41, 400000);
  EXPECT_TRUE(line.passed) << line.detail;
}

TEST(DetRatioTest, Examples) {
  const DetRatio zero = DetRatioBounds(Eigen::MatrixXd::Zero(3, 3), 1.5).value();
  EXPECT_DOUBLE_EQ(zero.ratio, 1.0);
  EXPECT_NEAR(zero.lower, std::pow(1.5, -3), 1e-15);
  EXPECT_NEAR(zero.upper, std::pow(1.5, 3), 1e-15);
  const DetRatio scalar =
      DetRatioBounds(Eigen::MatrixXd::Constant(1, 1, 0.1), 2.0).value();
  EXPECT_NEAR(scalar.ratio, oracle::kDetRatioScalar, 1e-15);
  EXPECT_DOUBLE_EQ(scalar.lower, 0.5);
  EXPECT_DOUBLE_EQ(scalar.upper, 2.0);
  EXPECT_EQ(DetRatioBounds(Eigen::MatrixXd::Constant(1, 1, 0.2), 2.0)
                .status()
                .code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE(DetRatioBounds(Eigen::MatrixXd::Zero(2, 2), 3.0).ok());
}

TEST(DetRatioTest, RandomNeverViolated) {
  const AuditLine line = AuditDetRatio(43, 1000);
  EXPECT_TRUE(line.passed) << line.detail;
}

TEST(JmjTest, Examples) {
  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, -3;
  const JmjResult id = JmjCheck(m, Eigen::MatrixXd::Identity(2, 2)).value();
  EXPECT_TRUE(id.holds);
  EXPECT_NEAR(id.phi, 0.0, 1e-15);
  EXPECT_NEAR(id.lhs, m.squaredNorm(), 1e-12);
  const JmjResult scaled =
      JmjCheck(m, 1.02 * Eigen::MatrixXd::Identity(2, 2)).value();
  EXPECT_TRUE(scaled.holds);
  EXPECT_NEAR(scaled.phi, oracle::kJmjPhi, 1e-12);
  EXPECT_NEAR(scaled.lhs, oracle::kJmjLhsFactor * m.squaredNorm(), 1e-10);
  EXPECT_NEAR(scaled.rhs, oracle::kJmjRhsFactor * m.squaredNorm(), 1e-10);
  EXPECT_EQ(JmjCheck(m, 2 * Eigen::MatrixXd::Identity(2, 2)).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(JmjTest, RandomAllHold) {
  const AuditLine line = AuditJmj(47, 1000);
  EXPECT_TRUE(line.passed) << line.detail;
}

TEST(RandomMatrixTest, Constraints) {
  Rng rng(9);
  for (int d = 1; d <= 6; ++d) {
    const Eigen::MatrixXd m = RandomSymmetric(d, 0.3, rng);
    EXPECT_NEAR(OperatorNormSymmetric(m), 0.3, 1e-12);
    EXPECT_TRUE(m.isApprox(m.transpose()));
    const Eigen::MatrixXd j = RandomWithSingularValues(d, 0.9, 1.1, rng);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
    EXPECT_GE(svd.singularValues().minCoeff(), 0.9 - 1e-12);
    EXPECT_LE(svd.singularValues().maxCoeff(), 1.1 + 1e-12);
  }
}

}  // namespace
}  // namespace dpgmm
