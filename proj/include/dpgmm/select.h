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

#ifndef DPGMM_SELECT_H_
#define DPGMM_SELECT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgmm/mech.h"
#include "dpgmm/model.h"
#include "dpgmm/nets.h"
#include "json.hpp"

namespace dpgmm {

enum class ScheffeMethod { kQuadrature, kMonteCarlo };

std::string ScheffeMethodName(ScheffeMethod method);

struct ScheffeSpec {
  double tolerance = 1e-4;        // d = 1 quadrature
  int64_t mc_samples = 50000;     // d >= 2
  uint64_t seed = 0;
  // Forces Monte Carlo even when d = 1.
  bool force_monte_carlo = false;
};

struct ScheffeEstimate {
  double mass = 0.0;       // P_target(A_ij)
  double empirical = 0.0;  // fraction of data in A_ij
  ScheffeMethod method = ScheffeMethod::kQuadrature;
  std::optional<double> mc_stderr;
};

// log sum_i w_i N(x; mu_i, Sigma_i), -inf where every weight is zero.
double MixtureLogDensity(const Mixture& m, std::span<const double> x);

// x in A_ij = {f_i > f_j}; ties are outside.
absl::StatusOr<bool> ScheffeMembership(const Mixture& h_i, const Mixture& h_j,
                                       std::span<const double> x);

// Disjoint open intervals, sorted, whose union is A_ij for d = 1. Endpoints
// may be infinite. Boundaries are located on a panel of mean +- multiples of
// sigma for every component and refined by bisection; a pair of crossings
// between adjacent panel points, or any crossing beyond 1024 sigma of every
// component, is not resolved.
absl::StatusOr<std::vector<std::pair<double, double>>> ScheffeIntervals(
    const Mixture& h_i, const Mixture& h_j);

// P_target(A_ij), and the empirical fraction when `data` is given.
absl::StatusOr<ScheffeEstimate> ScheffeMass(const Mixture& h_i,
                                            const Mixture& h_j,
                                            const Mixture& target,
                                            const ScheffeSpec& spec,
                                            const Dataset* data = nullptr);

struct MdeOptions {
  int64_t mc_samples = 50000;
  uint64_t seed = 0;
};

// score_i = max_{j != i} |P_{H_i}(A_ij) - emp(A_ij)|. For d = 1 the masses
// use the exact CDF over ScheffeIntervals; for d >= 2 each H_i contributes
// one Monte Carlo sample shared by all its pairs.
absl::StatusOr<std::vector<double>> MdeScores(
    std::span<const Mixture> hypotheses, const Dataset& data,
    const MdeOptions& options = {});

struct SelectionReport {
  size_t chosen = 0;
  std::vector<double> scores;
  double epsilon = 0.0;
  int64_t n = 0;
};

nlohmann::json SelectionReportToJson(const SelectionReport& report);

// Exponential mechanism with utility -n score_i and sensitivity 1.
absl::StatusOr<SelectionReport> PrivateSelect(
    std::span<const Mixture> hypotheses, const Dataset& data, double epsilon,
    Rng& rng, const MdeOptions& options = {});

}  // namespace dpgmm

#endif  // DPGMM_SELECT_H_
