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

#ifndef DPGMM_NETS_H_
#define DPGMM_NETS_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include "absl/status/statusor.h"
#include "dpgmm/mech.h"
#include "dpgmm/model.h"
#include "json.hpp"

namespace dpgmm {

inline constexpr int kDefaultMaxNetDim = 3;
inline constexpr int kMaxWeightGridSteps = 40;

// {(mu, Sigma) : G^{-1} cov <= Sigma <= G cov, ||cov^{-1/2}(mu - mean)|| <= G}.
struct CrudeBall {
  GaussianParams center;
  double g;

  static absl::StatusOr<CrudeBall> Create(GaussianParams center, double g);
};

struct NetOptions {
  int max_dim = kDefaultMaxNetDim;
  // Lattice factors (mean part, covariance part) with at most this many box
  // points are enumerated; larger ones are sampled by rejection.
  int64_t enumerate_limit = 2000000;
  uint64_t size_estimate_seed = 1;
};

// A finite cover of a crude ball, built in the whitened frame and pushed
// forward by the ball center.
//
// d = 1: variance levels r^j, r = 1 + zeta/2, |j| <= floor(ln G / ln r); at
// level s^2 the means are the multiples of zeta * s in [-G, G].
// d >= 2: the lattice of spacing 1/G', G' = G sqrt(d) / zeta, restricted to
// ||mu|| <= G and G^{-1} I <= Sigma <= G I.
class GaussianNet {
 public:
  static absl::StatusOr<GaussianNet> Build(const CrudeBall& ball, double zeta,
                                           const NetOptions& options = {});

  int dim() const { return ball_.center.dim(); }
  double zeta() const { return zeta_; }
  const CrudeBall& ball() const { return ball_; }
  // Exact when size_is_exact(); otherwise a Monte Carlo estimate.
  long double size() const;
  bool size_is_exact() const;
  // Random access; requires size_is_exact() and idx < size().
  absl::StatusOr<GaussianParams> At(long double idx) const;
  // A uniformly random element.
  GaussianParams SampleUniform(Rng& rng) const;
  // All elements in index order; fails if the net exceeds `limit`.
  absl::StatusOr<std::vector<GaussianParams>> Materialize(
      int64_t limit) const;

 private:
  // Integer lattice box with coordinates ilo..ihi (inclusive) per axis,
  // scaled by `step`.
  struct LatticeFactor {
    Eigen::VectorXd base;  // value at integer coordinate 0
    std::vector<int64_t> ilo;
    std::vector<int64_t> ihi;
    double step = 0.0;
    long double box_count = 0;
    bool enumerated = false;
    std::vector<Eigen::VectorXd> points;  // valid points when enumerated
    long double valid_estimate = 0;
  };

  GaussianNet(CrudeBall ball, double zeta) : ball_(std::move(ball)),
                                             zeta_(zeta) {}

  absl::Status BuildUnivariate();
  absl::Status BuildLattice(const NetOptions& options);
  bool MeanValid(const Eigen::VectorXd& mu0) const;
  bool CovValid(const Eigen::VectorXd& entries) const;
  Eigen::VectorXd SampleFactor(const LatticeFactor& f, bool is_mean,
                               Rng& rng) const;
  GaussianParams Push(const Eigen::VectorXd& mu0,
                      const Eigen::VectorXd& cov_entries) const;
  GaussianParams PushUnivariate(double mu0, double var0) const;

  CrudeBall ball_;
  double zeta_;
  // d = 1.
  std::vector<double> level_sd_;
  std::vector<long double> level_half_count_;
  std::vector<long double> level_offset_;
  long double univariate_size_ = 0;
  // d >= 2.
  LatticeFactor mean_factor_;
  LatticeFactor cov_factor_;
  Eigen::MatrixXd center_root_;
};

// The materialized cover of `ball`.
absl::StatusOr<std::vector<GaussianParams>> GaussianCover(
    const CrudeBall& ball, double zeta, int d, int64_t max_points = 1000000,
    const NetOptions& options = {});

// Compositions of 1/zeta into k parts scaled by zeta, in lexicographic
// order. Requires 1/zeta to be an integer no larger than 40.
absl::StatusOr<std::vector<std::vector<double>>> WeightGrid(int k,
                                                            double zeta);

struct HypothesisClass {
  std::vector<Mixture> hypotheses;
  double zeta = 1.0;
  bool truncated = false;
  // Number of (component tuple, weight vector) combinations before
  // deduplication.
  long double raw_size = 0;
};

struct HypothesisOptions {
  int64_t cap = 2000;
  uint64_t seed = 0;
  // Product sizes up to this bound are enumerated exhaustively.
  int64_t enumerate_limit = 2000000;
};

// Mixtures of at most k components drawn from the union of `covers` with
// weights on the zeta grid. Components with zero weight are dropped and
// equal components merged, so permutations collapse. Beyond `cap` distinct
// hypotheses a seeded uniform subsample of size `cap` is kept.
absl::StatusOr<HypothesisClass> MixtureHypotheses(
    const std::vector<std::vector<GaussianParams>>& covers, int k,
    double zeta, const HypothesisOptions& options);

// Same over implicit nets; elements are drawn uniformly from the union.
absl::StatusOr<HypothesisClass> MixtureHypotheses(
    const std::vector<GaussianNet>& nets, int k, double zeta,
    const HypothesisOptions& options);

nlohmann::json HypothesisClassToJson(const HypothesisClass& h);

// Canonical form: zero weights dropped, equal components merged, components
// sorted.
absl::StatusOr<Mixture> CanonicalMixture(
    std::vector<WeightedComponent> components);

}  // namespace dpgmm

#endif  // DPGMM_NETS_H_
