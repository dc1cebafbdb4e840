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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpgmm/linalg.h"

namespace dpgmm {
namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

bool AllFinite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

}  // namespace

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

GaussianParams::GaussianParams(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                               Eigen::MatrixXd chol)
    : mean_(std::move(mean)), cov_(std::move(cov)), chol_(std::move(chol)) {
  log_det_ = 2.0 * chol_.diagonal().array().log().sum();
  log_norm_ = -0.5 * dim() * kLogTwoPi - 0.5 * log_det_;
}

absl::StatusOr<GaussianParams> GaussianParams::Create(Eigen::VectorXd mean,
                                                      Eigen::MatrixXd cov) {
  const auto d = mean.size();
  if (d < 1) return absl::InvalidArgumentError("dimension must be >= 1");
  if (cov.rows() != d || cov.cols() != d) {
    return absl::InvalidArgumentError(absl::StrCat(
        "covariance is ", cov.rows(), "x", cov.cols(), ", expected ", d, "x",
        d));
  }
  if (!AllFinite({mean.data(), static_cast<size_t>(d)}) ||
      !AllFinite({cov.data(), static_cast<size_t>(d * d)})) {
    return absl::InvalidArgumentError("non-finite Gaussian parameter");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > kModelTolerance) {
    return absl::InvalidArgumentError("covariance is not symmetric");
  }
  Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success ||
      !(llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 0.0)) {
    return absl::InvalidArgumentError("covariance is not positive definite");
  }
  Eigen::MatrixXd chol = llt.matrixL();
  return GaussianParams(std::move(mean), std::move(sym), std::move(chol));
}

absl::StatusOr<GaussianParams> GaussianParams::Univariate(double mean,
                                                          double variance) {
  return Create(Eigen::VectorXd::Constant(1, mean),
                Eigen::MatrixXd::Constant(1, 1, variance));
}

GaussianParams GaussianParams::StandardNormal(int d) {
  return GaussianParams(Eigen::VectorXd::Zero(d),
                        Eigen::MatrixXd::Identity(d, d),
                        Eigen::MatrixXd::Identity(d, d));
}

double GaussianParams::LogDensity(std::span<const double> x) const {
  const int d = dim();
  if (d == 1) return LogDensity1(x[0]);
  constexpr int kStackDim = 16;
  if (d <= kStackDim) {
    // Forward substitution L z = x - mean on the stack.
    double z[kStackDim];
    double quad = 0.0;
    for (int i = 0; i < d; ++i) {
      double s = x[i] - mean_(i);
      for (int j = 0; j < i; ++j) s -= chol_(i, j) * z[j];
      z[i] = s / chol_(i, i);
      quad += z[i] * z[i];
    }
    return log_norm_ - 0.5 * quad;
  }
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), d);
  Eigen::VectorXd z = chol_.triangularView<Eigen::Lower>().solve(xv - mean_);
  return log_norm_ - 0.5 * z.squaredNorm();
}

double GaussianParams::LogDensity1(double x) const {
  const double z = (x - mean_(0)) / chol_(0, 0);
  return log_norm_ - 0.5 * z * z;
}

double GaussianParams::Density1(double x) const {
  return std::exp(LogDensity1(x));
}

double GaussianParams::Cdf1(double x) const {
  return NormalCdf((x - mean_(0)) / chol_(0, 0));
}

absl::StatusOr<Mixture> Mixture::Create(
    std::vector<WeightedComponent> components, int max_components) {
  if (components.empty()) {
    return absl::InvalidArgumentError("mixture needs at least one component");
  }
  if (static_cast<int>(components.size()) > max_components) {
    return absl::InvalidArgumentError(
        absl::StrCat("mixture has ", components.size(),
                     " components, limit is ", max_components));
  }
  const int d = components.front().params.dim();
  double total = 0.0;
  for (const auto& c : components) {
    if (c.params.dim() != d) {
      return absl::InvalidArgumentError("mixture components differ in dimension");
    }
    if (!std::isfinite(c.weight) || c.weight < 0.0) {
      return absl::InvalidArgumentError("mixture weight must be finite and >= 0");
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kModelTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("mixture weights sum to ", total));
  }
  return Mixture(std::move(components));
}

Mixture Mixture::Single(GaussianParams params) {
  return Mixture({WeightedComponent{1.0, std::move(params)}});
}

double Mixture::Density(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& c : components_) {
    if (c.weight > 0.0) sum += c.weight * std::exp(c.params.LogDensity(x));
  }
  return sum;
}

double Mixture::Density1(double x) const {
  double sum = 0.0;
  for (const auto& c : components_) {
    if (c.weight > 0.0) sum += c.weight * c.params.Density1(x);
  }
  return sum;
}

double Mixture::Cdf1(double x) const {
  double sum = 0.0;
  for (const auto& c : components_) sum += c.weight * c.params.Cdf1(x);
  return sum;
}

std::pair<double, double> Mixture::Window1(double halfwidth_sigmas) const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& c : components_) {
    const double s = c.params.stddev1();
    lo = std::min(lo, c.params.mean1() - halfwidth_sigmas * s);
    hi = std::max(hi, c.params.mean1() + halfwidth_sigmas * s);
  }
  return {lo, hi};
}

bool operator==(const Mixture& a, const Mixture& b) {
  if (a.components_.size() != b.components_.size()) return false;
  for (size_t i = 0; i < a.components_.size(); ++i) {
    if (a.components_[i].weight != b.components_[i].weight ||
        !(a.components_[i].params == b.components_[i].params)) {
      return false;
    }
  }
  return true;
}

absl::StatusOr<double> Density(const Mixture& mixture,
                               std::span<const double> x) {
  if (static_cast<int>(x.size()) != mixture.dim()) {
    return absl::InvalidArgumentError(
        absl::StrCat("point has dimension ", x.size(), ", mixture has ",
                     mixture.dim()));
  }
  return mixture.Density(x);
}

absl::StatusOr<Dataset> Dataset::Create(int64_t n, int d,
                                        std::vector<double> values) {
  if (n < 1 || d < 1) {
    return absl::InvalidArgumentError("dataset needs n >= 1 and d >= 1");
  }
  if (static_cast<int64_t>(values.size()) != n * d) {
    return absl::InvalidArgumentError("dataset size does not match n * d");
  }
  if (!AllFinite(values)) {
    return absl::InvalidArgumentError("dataset contains non-finite entries");
  }
  return Dataset(n, d, std::move(values));
}

absl::StatusOr<Dataset> Dataset::FromColumn(std::vector<double> values) {
  const auto n = static_cast<int64_t>(values.size());
  return Create(n, 1, std::move(values));
}

absl::StatusOr<Dataset> Dataset::Slice(int64_t begin, int64_t end) const {
  if (begin < 0 || end > n_ || begin >= end) {
    return absl::OutOfRangeError(
        absl::StrCat("slice [", begin, ", ", end, ") of ", n_, " rows"));
  }
  return Dataset(end - begin, d_,
                 std::vector<double>(values_.begin() + begin * d_,
                                     values_.begin() + end * d_));
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon,
                                                    double delta) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in [0, 1)");
  }
  return PrivacyBudget{epsilon, delta};
}

absl::StatusOr<Dataset> Sample(const Mixture& mixture, int64_t n,
                               uint64_t seed) {
  if (n < 1) return absl::InvalidArgumentError("sample size must be >= 1");
  const int d = mixture.dim();
  const auto& comps = mixture.components();
  std::vector<double> cumulative(comps.size());
  double acc = 0.0;
  for (size_t i = 0; i < comps.size(); ++i) {
    acc += comps[i].weight;
    cumulative[i] = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> values(static_cast<size_t>(n) * d);
  Eigen::VectorXd z(d);
  for (int64_t i = 0; i < n; ++i) {
    const double u = unif(rng) * acc;
    size_t c = 0;
    while (c + 1 < comps.size() && !(u < cumulative[c] && comps[c].weight > 0))
      ++c;
    for (int j = 0; j < d; ++j) z(j) = normal(rng);
    const auto& g = comps[c].params;
    Eigen::VectorXd x = g.mean() + g.cholesky() * z;
    std::copy(x.data(), x.data() + d, values.begin() + i * d);
  }
  return Dataset::Create(n, d, std::move(values));
}

absl::StatusOr<double> TvUpperBound(const GaussianParams& g1,
                                    const GaussianParams& g2) {
  if (g1.dim() != g2.dim()) {
    return absl::InvalidArgumentError("Gaussians differ in dimension");
  }
  auto inv_root = SymmetricInverseSqrt(g1.cov());
  if (!inv_root.ok()) return inv_root.status();
  const Eigen::MatrixXd& w = *inv_root;
  Eigen::MatrixXd m = w * g2.cov() * w -
                      Eigen::MatrixXd::Identity(g1.dim(), g1.dim());
  const double frob = m.norm();
  const double maha = (w * (g1.mean() - g2.mean())).norm();
  return std::max(frob, maha) / std::numbers::sqrt2;
}

}  // namespace dpgmm
