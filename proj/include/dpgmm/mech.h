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

#ifndef DPGMM_MECH_H_
#define DPGMM_MECH_H_

#include <random>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgmm/model.h"

namespace dpgmm {

using Rng = std::mt19937_64;

// Deterministic child seed of (master, a, b).
uint64_t DeriveSeed(uint64_t master, uint64_t a, uint64_t b = 0);

// Truncated Laplace law TLap(sensitivity, epsilon, delta): density
// proportional to exp(-|x| epsilon / sensitivity) on [-bound, bound] with
//   bound = (sensitivity / epsilon) * ln(1 + (e^epsilon - 1) / (2 delta)).
class TruncLapSpec {
 public:
  static absl::StatusOr<TruncLapSpec> Create(double sensitivity,
                                             double epsilon, double delta);
  // Same law with an explicit support bound. Only used to probe what
  // happens when the support is too small.
  static absl::StatusOr<TruncLapSpec> CreateWithBound(double sensitivity,
                                                      double epsilon,
                                                      double delta,
                                                      double bound);

  double sensitivity() const { return sensitivity_; }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double bound() const { return bound_; }
  // epsilon / sensitivity.
  double rate() const { return epsilon_ / sensitivity_; }

  double Pdf(double x) const;
  double Cdf(double x) const;
  double InverseCdf(double u) const;

 private:
  TruncLapSpec(double sensitivity, double epsilon, double delta, double bound)
      : sensitivity_(sensitivity),
        epsilon_(epsilon),
        delta_(delta),
        bound_(bound) {}

  double sensitivity_;
  double epsilon_;
  double delta_;
  double bound_;
};

double TruncLapBound(double sensitivity, double epsilon, double delta);

// Inverse-CDF draw; |result| <= spec.bound() always.
double SampleTruncLap(const TruncLapSpec& spec, Rng& rng);

// Discretized (epsilon, delta) check for the mechanism f(X) + TLap when f
// moves by `shift`. The range [-A - sensitivity, A + sensitivity] is cut into
// `grid` cells; the cell masses of the shifted and unshifted laws are exact
// CDF differences, and the worst event (the cells where one law exceeds
// e^epsilon times the other) is tested in both directions against
// delta + 2 sensitivity * max_density / grid.
absl::StatusOr<bool> TruncLapDpRatioCheck(const TruncLapSpec& spec,
                                          double shift, int grid);

// Exponential mechanism: index i with probability proportional to
// exp(epsilon u_i / (2 sensitivity)).
absl::StatusOr<size_t> ExponentialMechanism(std::span<const double> utilities,
                                            double sensitivity, double epsilon,
                                            Rng& rng);
// The exact output law of ExponentialMechanism (log-sum-exp stabilized).
absl::StatusOr<std::vector<double>> ExponentialMechanismProbabilities(
    std::span<const double> utilities, double sensitivity, double epsilon);

// Advanced composition of k adaptive (epsilon, delta)-DP steps:
// (sqrt(2k ln(1/delta')) eps + k eps (e^eps - 1), k delta + delta').
absl::StatusOr<PrivacyBudget> AdvancedComposition(int k, double epsilon,
                                                  double delta,
                                                  double delta_prime);

}  // namespace dpgmm

#endif  // DPGMM_MECH_H_
