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
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpgmm/linalg.h"
#include "dpgmm/status_macros.h"

namespace dpgmm {
namespace {

Eigen::MatrixXd HaarOrthogonal(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR();
  for (int i = 0; i < d; ++i) {
    if (r(i, i) < 0) q.col(i) *= -1.0;
  }
  return q;
}

}  // namespace

absl::StatusOr<ApproxParams> ApproxParams::Create(double gamma, double rho,
                                                  double tau) {
  if (!(gamma > 0.0 && rho > 0.0 && tau > 0.0)) {
    return absl::InvalidArgumentError("approx parameters must be positive");
  }
  return ApproxParams{gamma, rho, tau};
}

absl::StatusOr<ApproxParams> ApproxParams::Spectral(double gamma, double tau,
                                                    int d) {
  if (d < 1) return absl::InvalidArgumentError("d must be >= 1");
  return Create(gamma, std::sqrt(static_cast<double>(d)) * gamma, tau);
}

absl::StatusOr<ApproxDistances> ComputeApproxDistances(
    const GaussianParams& hat, const GaussianParams& base) {
  if (hat.dim() != base.dim()) {
    return absl::InvalidArgumentError("dimension mismatch");
  }
  DPGMM_ASSIGN_OR_RETURN(const Eigen::MatrixXd w,
                         SymmetricInverseSqrt(base.cov()));
  Eigen::MatrixXd m = w * hat.cov() * w;
  m = 0.5 * (m + m.transpose());
  m -= Eigen::MatrixXd::Identity(hat.dim(), hat.dim());
  return ApproxDistances{OperatorNormSymmetric(m), m.norm(),
                         (w * (hat.mean() - base.mean())).norm()};
}

absl::StatusOr<bool> ApproxCheck(const GaussianParams& hat,
                                 const GaussianParams& base,
                                 const ApproxParams& p) {
  DPGMM_ASSIGN_OR_RETURN(const ApproxDistances dist,
                         ComputeApproxDistances(hat, base));
  // Relative slack absorbs rounding in the whitening step.
  constexpr double kSlack = 1.0 + 1e-12;
  return dist.spectral <= p.gamma * kSlack && dist.frobenius <= p.rho * kSlack &&
         dist.mahalanobis <= p.tau * kSlack;
}

absl::StatusOr<GaussianParams> AffinePush(const GaussianParams& p,
                                          const Eigen::VectorXd& mu,
                                          const Eigen::MatrixXd& sigma) {
  if (mu.size() != p.dim() || sigma.rows() != p.dim() ||
      sigma.cols() != p.dim()) {
    return absl::InvalidArgumentError("dimension mismatch");
  }
  DPGMM_ASSIGN_OR_RETURN(const Eigen::MatrixXd root, SymmetricSqrt(sigma));
  Eigen::MatrixXd cov = root * p.cov() * root;
  cov = 0.5 * (cov + cov.transpose());
  return GaussianParams::Create(root * p.mean() + mu, std::move(cov));
}

int ProjDim(int d) { return d * (d + 3) / 2; }

Eigen::VectorXd Proj(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
  const int d = static_cast<int>(mu.size());
  Eigen::VectorXd theta(ProjDim(d));
  int idx = 0;
  for (int i = 0; i < d; ++i) theta(idx++) = mu(i);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) theta(idx++) = sigma(i, j);
  }
  return theta;
}

void Unproj(const Eigen::VectorXd& theta, int d, Eigen::VectorXd* mu,
            Eigen::MatrixXd* sigma) {
  mu->resize(d);
  sigma->resize(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i) (*mu)(i) = theta(idx++);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      (*sigma)(i, j) = theta(idx);
      (*sigma)(j, i) = theta(idx);
      ++idx;
    }
  }
}

absl::StatusOr<McEstimate> NvolMc(const ParamRegion& region, int64_t samples,
                                  uint64_t seed) {
  const int d = region.d;
  const int dim = ProjDim(d);
  if (d < 1 || region.lo.size() != dim || region.hi.size() != dim) {
    return absl::InvalidArgumentError("box does not match dimension");
  }
  if (samples < 10000) {
    return absl::InvalidArgumentError("nvol needs >= 10000 samples");
  }
  double box_volume = 1.0;
  for (int i = 0; i < dim; ++i) {
    const double w = region.hi(i) - region.lo(i);
    if (!(w > 0.0) || !std::isfinite(w)) {
      return absl::InvalidArgumentError("degenerate box");
    }
    box_volume *= w;
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd theta(dim);
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;
  const double power = -0.5 * (d + 2);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int64_t s = 0; s < samples; ++s) {
    for (int i = 0; i < dim; ++i) {
      theta(i) = region.lo(i) + (region.hi(i) - region.lo(i)) * unit(rng);
    }
    Unproj(theta, d, &mu, &sigma);
    absl::StatusOr<GaussianParams> p = GaussianParams::Create(mu, sigma);
    if (!p.ok()) continue;
    if (region.contains && !region.contains(*p)) continue;
    const double v = std::exp(power * p->log_det());
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean) * n / (n - 1.0);
  return McEstimate{box_volume * mean, box_volume * std::sqrt(var / n)};
}

void ApproxBallBox(const GaussianParams& center, double gamma, double tau,
                   Eigen::VectorXd* lo, Eigen::VectorXd* hi) {
  const int d = center.dim();
  const Eigen::MatrixXd& s0 = center.cov();
  Eigen::VectorXd half(ProjDim(d));
  int idx = 0;
  // |e_i^T S0^{1/2} v| <= ||S0^{1/2} e_i|| ||v|| = sqrt(S0_ii) ||v||.
  for (int i = 0; i < d; ++i) half(idx++) = tau * std::sqrt(s0(i, i));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      half(idx++) = gamma * std::sqrt(s0(i, i) * s0(j, j));
    }
  }
  const Eigen::VectorXd c = Proj(center.mean(), s0);
  *lo = c - half;
  *hi = c + half;
}

absl::StatusOr<DetRatio> DetRatioBounds(const Eigen::MatrixXd& m, double nu) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    return absl::InvalidArgumentError("M must be square");
  }
  if (!(nu >= 1.0 && nu <= 2.0)) {
    return absl::InvalidArgumentError("nu must lie in [1, 2]");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kModelTolerance) {
    return absl::InvalidArgumentError("M must be symmetric");
  }
  if (OperatorNormSymmetric(m) > 0.1) {
    return absl::FailedPreconditionError("||M||_op exceeds 0.1");
  }
  const int d = static_cast<int>(m.rows());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const double ratio = (id + nu * m).determinant() / (id + m).determinant();
  return DetRatio{ratio, std::pow(nu, -d), std::pow(nu, d)};
}

absl::StatusOr<JmjResult> JmjCheck(const Eigen::MatrixXd& m,
                                   const Eigen::MatrixXd& j) {
  if (m.rows() != m.cols() || j.rows() != m.rows() || j.cols() != m.cols()) {
    return absl::InvalidArgumentError("M and J must be square of equal size");
  }
  const int d = static_cast<int>(m.rows());
  const double phi = OperatorNormSymmetric(
      j * j.transpose() - Eigen::MatrixXd::Identity(d, d));
  if (phi > 1.0) {
    return absl::FailedPreconditionError(
        absl::StrCat("phi = ", phi, " exceeds 1"));
  }
  const double lhs = (j.transpose() * m * j).squaredNorm();
  const double rhs = (1.0 + 3.0 * phi) * m.squaredNorm();
  return JmjResult{lhs <= rhs * (1.0 + 1e-12), phi, lhs, rhs};
}

Eigen::MatrixXd RandomSymmetric(int d, double op_norm, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) a(i, k) = normal(rng);
  }
  Eigen::MatrixXd s = 0.5 * (a + a.transpose());
  const double norm = OperatorNormSymmetric(s);
  if (norm > 0.0) s *= op_norm / norm;
  return s;
}

Eigen::MatrixXd RandomWithSingularValues(int d, double lo, double hi,
                                         Rng& rng) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Eigen::VectorXd s(d);
  for (int i = 0; i < d; ++i) s(i) = unif(rng);
  const Eigen::MatrixXd q = HaarOrthogonal(d, rng);
  const Eigen::MatrixXd r = HaarOrthogonal(d, rng);
  return q * s.asDiagonal() * r;
}

Eigen::MatrixXd RandomSpd(int d, double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> unif(lo, hi);
  Eigen::VectorXd ev(d);
  for (int i = 0; i < d; ++i) ev(i) = unif(rng);
  const Eigen::MatrixXd q = HaarOrthogonal(d, rng);
  Eigen::MatrixXd out = q * ev.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace dpgmm
