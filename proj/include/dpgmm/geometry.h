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

#ifndef DPGMM_GEOMETRY_H_
#define DPGMM_GEOMETRY_H_

#include <cstdint>
#include <functional>

#include <Eigen/Dense>
#include "absl/status/statusor.h"
#include "dpgmm/mech.h"
#include "dpgmm/model.h"

namespace dpgmm {

// Tolerances of the closeness relation: spectral (gamma), Frobenius (rho)
// and Mahalanobis (tau).
struct ApproxParams {
  double gamma;
  double rho;
  double tau;

  static absl::StatusOr<ApproxParams> Create(double gamma, double rho,
                                             double tau);
  // Shorthand with rho = sqrt(d) gamma.
  static absl::StatusOr<ApproxParams> Spectral(double gamma, double tau,
                                               int d);
  ApproxParams Scaled(double factor) const {
    return {gamma * factor, rho * factor, tau * factor};
  }
};

// The three distances of `hat` measured in the frame of `base`.
struct ApproxDistances {
  double spectral;
  double frobenius;
  double mahalanobis;
};

absl::StatusOr<ApproxDistances> ComputeApproxDistances(
    const GaussianParams& hat, const GaussianParams& base);

// True iff hat is within p of base in all three distances.
absl::StatusOr<bool> ApproxCheck(const GaussianParams& hat,
                                 const GaussianParams& base,
                                 const ApproxParams& p);

// (Sigma^{1/2} p.mean + mu, Sigma^{1/2} p.cov Sigma^{1/2}).
absl::StatusOr<GaussianParams> AffinePush(const GaussianParams& p,
                                          const Eigen::VectorXd& mu,
                                          const Eigen::MatrixXd& sigma);

// Number of coordinates of Proj(mu, Sigma): d(d+3)/2.
int ProjDim(int d);

// mu followed by the upper triangle of Sigma in row-major order.
Eigen::VectorXd Proj(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma);

// Inverse of Proj for dimension d; the covariance is not checked for
// definiteness.
void Unproj(const Eigen::VectorXd& theta, int d, Eigen::VectorXd* mu,
            Eigen::MatrixXd* sigma);

// A region of (mu, Sigma) pairs inside an axis-aligned box of Proj
// coordinates. The predicate sees only SPD points.
struct ParamRegion {
  int d = 1;
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
  std::function<bool(const GaussianParams&)> contains;
};

struct McEstimate {
  double value;
  double std_error;
};

// Monte Carlo integral of det(Sigma)^{-(d+2)/2} over the region. Points
// whose Sigma is not SPD contribute zero.
absl::StatusOr<McEstimate> NvolMc(const ParamRegion& region, int64_t samples,
                                  uint64_t seed);

// Box in Proj coordinates that contains every (mu, Sigma) with
// ||Sigma0^{-1/2}(mu - mu0)|| <= tau and ||Sigma0^{-1/2} Sigma Sigma0^{-1/2}
// - I||_op <= gamma.
void ApproxBallBox(const GaussianParams& center, double gamma, double tau,
                   Eigen::VectorXd* lo, Eigen::VectorXd* hi);

struct DetRatio {
  double ratio;
  double lower;
  double upper;
};

// det(I + nu M) / det(I + M) with the bounds nu^{-d} and nu^d. Requires
// ||M||_op <= 0.1 and nu in [1, 2].
absl::StatusOr<DetRatio> DetRatioBounds(const Eigen::MatrixXd& m, double nu);

struct JmjResult {
  bool holds;
  double phi;  // ||J J^T - I||_op
  double lhs;  // ||J^T M J||_F^2
  double rhs;  // (1 + 3 phi) ||M||_F^2
};

// Requires phi <= 1.
absl::StatusOr<JmjResult> JmjCheck(const Eigen::MatrixXd& m,
                                   const Eigen::MatrixXd& j);

// Gaussian orthogonal ensemble draw rescaled to operator norm exactly
// `op_norm`.
Eigen::MatrixXd RandomSymmetric(int d, double op_norm, Rng& rng);

// Q diag(s) R with Haar-random orthogonal Q, R and s uniform in [lo, hi].
Eigen::MatrixXd RandomWithSingularValues(int d, double lo, double hi,
                                         Rng& rng);

// Random SPD matrix with eigenvalues uniform in [lo, hi].
Eigen::MatrixXd RandomSpd(int d, double lo, double hi, Rng& rng);

}  // namespace dpgmm

#endif  // DPGMM_GEOMETRY_H_
