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

#ifndef DPGMM_MODEL_H_
#define DPGMM_MODEL_H_

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"

namespace dpgmm {

// Absolute tolerance for covariance symmetry and for mixture weight sums.
inline constexpr double kModelTolerance = 1e-9;
inline constexpr int kDefaultMaxComponents = 64;

// Mean and positive-definite covariance of one Gaussian. Immutable; the
// Cholesky factor is computed once at construction and doubles as the SPD
// certificate.
class GaussianParams {
 public:
  static absl::StatusOr<GaussianParams> Create(Eigen::VectorXd mean,
                                               Eigen::MatrixXd cov);
  static absl::StatusOr<GaussianParams> Univariate(double mean,
                                                   double variance);
  static GaussianParams StandardNormal(int d);

  int dim() const { return static_cast<int>(mean_.size()); }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  // Lower-triangular L with L L^T = cov.
  const Eigen::MatrixXd& cholesky() const { return chol_; }
  double log_det() const { return log_det_; }

  // Univariate accessors; only meaningful when dim() == 1.
  double mean1() const { return mean_(0); }
  double variance1() const { return cov_(0, 0); }
  double stddev1() const { return chol_(0, 0); }

  double LogDensity(std::span<const double> x) const;
  double LogDensity1(double x) const;
  double Density1(double x) const;
  double Cdf1(double x) const;

  friend bool operator==(const GaussianParams& a, const GaussianParams& b) {
    return a.mean_ == b.mean_ && a.cov_ == b.cov_;
  }

 private:
  GaussianParams(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                 Eigen::MatrixXd chol);

  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  double log_det_ = 0.0;
  double log_norm_ = 0.0;  // -(d/2) log(2 pi) - (1/2) log det
};

struct WeightedComponent {
  double weight;
  GaussianParams params;
};

// Convex combination of Gaussians sharing one dimension.
class Mixture {
 public:
  static absl::StatusOr<Mixture> Create(
      std::vector<WeightedComponent> components,
      int max_components = kDefaultMaxComponents);
  static Mixture Single(GaussianParams params);

  int dim() const { return components_.front().params.dim(); }
  size_t size() const { return components_.size(); }
  const std::vector<WeightedComponent>& components() const {
    return components_;
  }

  double Density(std::span<const double> x) const;
  double Density1(double x) const;
  double Cdf1(double x) const;

  // Smallest window [lo, hi] containing every mean +- halfwidth sigma (d=1).
  std::pair<double, double> Window1(double halfwidth_sigmas) const;

  friend bool operator==(const Mixture& a, const Mixture& b);

 private:
  explicit Mixture(std::vector<WeightedComponent> components)
      : components_(std::move(components)) {}

  std::vector<WeightedComponent> components_;
};

// Checked density evaluation; rejects a point of the wrong dimension.
absl::StatusOr<double> Density(const Mixture& mixture,
                               std::span<const double> x);

// n x d sample matrix stored row-major.
class Dataset {
 public:
  static absl::StatusOr<Dataset> Create(int64_t n, int d,
                                        std::vector<double> values);
  static absl::StatusOr<Dataset> FromColumn(std::vector<double> values);

  int64_t n() const { return n_; }
  int d() const { return d_; }
  std::span<const double> row(int64_t i) const {
    return {values_.data() + i * d_, static_cast<size_t>(d_)};
  }
  const std::vector<double>& values() const { return values_; }

  // Rows [begin, end) as a new dataset.
  absl::StatusOr<Dataset> Slice(int64_t begin, int64_t end) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  Dataset(int64_t n, int d, std::vector<double> values)
      : n_(n), d_(d), values_(std::move(values)) {}

  int64_t n_ = 0;
  int d_ = 0;
  std::vector<double> values_;
};

struct PrivacyBudget {
  static absl::StatusOr<PrivacyBudget> Create(double epsilon, double delta);

  double epsilon = 1.0;
  double delta = 0.0;
};

// n i.i.d. draws; the component index comes from the weights, the point from
// the component's Cholesky factor. Deterministic in (mixture, n, seed).
absl::StatusOr<Dataset> Sample(const Mixture& mixture, int64_t n,
                               uint64_t seed);

// (1/sqrt 2) max(||S1^{-1/2} S2 S1^{-1/2} - I||_F, ||S1^{-1/2}(m1 - m2)||_2),
// an upper bound on TV(N(m1, S1), N(m2, S2)).
absl::StatusOr<double> TvUpperBound(const GaussianParams& g1,
                                    const GaussianParams& g2);

// Standard normal CDF.
double NormalCdf(double z);

}  // namespace dpgmm

#endif  // DPGMM_MODEL_H_
