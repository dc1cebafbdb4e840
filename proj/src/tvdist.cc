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

#include "dpgmm/tvdist.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "absl/status/status.h"
#include "dpgmm/status_macros.h"

namespace dpgmm {
namespace {

constexpr double kPanelSigmas[] = {0.0, 1.0, 2.0, 4.0, 8.0, 12.0};

std::vector<double> PanelPoints(const Mixture& m) {
  std::vector<double> pts;
  for (const WeightedComponent& c : m.components()) {
    const double mu = c.params.mean1();
    const double s = c.params.stddev1();
    for (double k : kPanelSigmas) {
      pts.push_back(mu - k * s);
      pts.push_back(mu + k * s);
    }
  }
  return pts;
}

}  // namespace

std::string TvMethodName(TvMethod method) {
  return method == TvMethod::kQuadrature ? "quadrature" : "monte-carlo";
}

double TailMassBound(const Mixture& /*mixture*/) {
  // Each component loses at most 2 Phi(-12) outside its own window, and the
  // mixture window contains every component window.
  return 2.0 * NormalCdf(-kTailSigmas);
}

absl::StatusOr<TVEstimate> TvUnivariate(const Mixture& m1, const Mixture& m2,
                                        double tol) {
  if (m1.dim() != 1 || m2.dim() != 1) {
    return absl::UnimplementedError("quadrature TV requires d = 1");
  }
  if (!(tol > 0.0)) return absl::InvalidArgumentError("tol must be positive");
  const auto [lo1, hi1] = m1.Window1(kTailSigmas);
  const auto [lo2, hi2] = m2.Window1(kTailSigmas);
  const double lo = std::min(lo1, lo2);
  const double hi = std::max(hi1, hi2);
  std::vector<double> seeds = PanelPoints(m1);
  const std::vector<double> more = PanelPoints(m2);
  seeds.insert(seeds.end(), more.begin(), more.end());
  auto integrand = [&](double x) {
    return 0.5 * std::abs(m1.Density1(x) - m2.Density1(x));
  };
  const double raw = AdaptiveSimpson(integrand, lo, hi, tol, seeds);
  TVEstimate est;
  est.method = TvMethod::kQuadrature;
  est.value = std::clamp(raw, 0.0, 1.0);
  est.error_bound = tol + 0.5 * (TailMassBound(m1) + TailMassBound(m2));
  return est;
}

absl::StatusOr<TVEstimate> TvMonteCarlo(const Mixture& m1, const Mixture& m2,
                                        int64_t samples, uint64_t seed) {
  if (samples < 1000) {
    return absl::InvalidArgumentError("Monte Carlo TV needs >= 1000 samples");
  }
  if (m1.dim() != m2.dim()) {
    return absl::InvalidArgumentError("mixtures differ in dimension");
  }
  DPGMM_ASSIGN_OR_RETURN(const Dataset draws, Sample(m1, samples, seed));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int64_t i = 0; i < draws.n(); ++i) {
    const auto x = draws.row(i);
    const double f = m1.Density(x);
    const double g = m2.Density(x);
    const double v = f > 0.0 ? std::max(0.0, 1.0 - g / f) : 0.0;
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean) * n / (n - 1.0);
  TVEstimate est;
  est.method = TvMethod::kMonteCarlo;
  est.value = mean;
  est.error_bound = kMcErrorSigmas * std::sqrt(var / n);
  return est;
}

}  // namespace dpgmm
