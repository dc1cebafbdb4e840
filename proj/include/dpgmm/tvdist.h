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

#ifndef DPGMM_TVDIST_H_
#define DPGMM_TVDIST_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "dpgmm/model.h"

namespace dpgmm {

enum class TvMethod { kQuadrature, kMonteCarlo };

struct TVEstimate {
  double value = 0.0;
  TvMethod method = TvMethod::kQuadrature;
  double error_bound = 0.0;
};

std::string TvMethodName(TvMethod method);

// Half-width, in standard deviations, of the integration window around every
// component mean.
inline constexpr double kTailSigmas = 12.0;

// Adaptive Simpson integral of f over [lo, hi] with absolute tolerance `tol`,
// split across subintervals in proportion to their length. `seeds` are
// interior breakpoints (need not be sorted or inside the interval).
template <typename F>
double AdaptiveSimpson(const F& f, double lo, double hi, double tol,
                       std::vector<double> seeds = {});

// Mass a d=1 mixture places outside its window of kTailSigmas standard
// deviations around every component mean (an upper bound).
double TailMassBound(const Mixture& mixture);

// (1/2) integral |f - g| for d=1 mixtures. value is clamped into [0, 1].
absl::StatusOr<TVEstimate> TvUnivariate(const Mixture& m1, const Mixture& m2,
                                        double tol = 1e-6);

// Standard errors in a Monte Carlo error bound.
inline constexpr double kMcErrorSigmas = 4.0;

// E_{x ~ m1}[max(0, 1 - g(x)/f(x))] from `samples` draws of m1. The error
// bound is kMcErrorSigmas standard errors.
absl::StatusOr<TVEstimate> TvMonteCarlo(const Mixture& m1, const Mixture& m2,
                                        int64_t samples, uint64_t seed);

}  // namespace dpgmm

#include "dpgmm/tvdist_inl.h"  // IWYU pragma: export

#endif  // DPGMM_TVDIST_H_
