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

#ifndef DPGMM_LINALG_H_
#define DPGMM_LINALG_H_

#include <Eigen/Dense>

#include "absl/status/statusor.h"

namespace dpgmm {

// SPD square root and inverse square root through an eigendecomposition.
// Fails unless the smallest eigenvalue exceeds 1e-12 times the largest.
absl::StatusOr<Eigen::MatrixXd> SymmetricSqrt(const Eigen::MatrixXd& a);
absl::StatusOr<Eigen::MatrixXd> SymmetricInverseSqrt(const Eigen::MatrixXd& a);

// Largest absolute eigenvalue of a symmetric matrix.
double OperatorNormSymmetric(const Eigen::MatrixXd& a);
// Largest singular value of a general matrix.
double OperatorNorm(const Eigen::MatrixXd& a);

}  // namespace dpgmm

#endif  // DPGMM_LINALG_H_
