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

#include "dpgmm/linalg.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"

namespace dpgmm {
namespace {

constexpr double kEigenFloor = 1e-12;

absl::StatusOr<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> SpdEigen(
    const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    return absl::InvalidArgumentError("matrix must be square and nonempty");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    return absl::InvalidArgumentError("eigendecomposition failed");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  if (!(ev.minCoeff() > kEigenFloor * std::max(ev.maxCoeff(), 0.0)) ||
      ev.maxCoeff() <= 0.0) {
    return absl::InvalidArgumentError("matrix is not positive definite");
  }
  return solver;
}

}  // namespace

absl::StatusOr<Eigen::MatrixXd> SymmetricSqrt(const Eigen::MatrixXd& a) {
  auto solver = SpdEigen(a);
  if (!solver.ok()) return solver.status();
  const auto& v = solver->eigenvectors();
  return v * solver->eigenvalues().cwiseSqrt().asDiagonal() * v.transpose();
}

absl::StatusOr<Eigen::MatrixXd> SymmetricInverseSqrt(const Eigen::MatrixXd& a) {
  auto solver = SpdEigen(a);
  if (!solver.ok()) return solver.status();
  const auto& v = solver->eigenvectors();
  return v * solver->eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         v.transpose();
}

double OperatorNormSymmetric(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

double OperatorNorm(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace dpgmm
