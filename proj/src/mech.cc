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

#include "dpgmm/mech.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dpgmm {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t master, uint64_t a, uint64_t b) {
  return SplitMix64(SplitMix64(SplitMix64(master) ^ a) ^ SplitMix64(~b));
}

double TruncLapBound(double sensitivity, double epsilon, double delta) {
  return sensitivity / epsilon *
         std::log1p(std::expm1(epsilon) / (2.0 * delta));
}

absl::StatusOr<TruncLapSpec> TruncLapSpec::Create(double sensitivity,
                                                  double epsilon,
                                                  double delta) {
  return CreateWithBound(sensitivity, epsilon, delta,
                         TruncLapBound(sensitivity, epsilon, delta));
}

absl::StatusOr<TruncLapSpec> TruncLapSpec::CreateWithBound(double sensitivity,
                                                           double epsilon,
                                                           double delta,
                                                           double bound) {
  if (!(sensitivity > 0.0) || !std::isfinite(sensitivity)) {
    return absl::InvalidArgumentError("sensitivity must be positive");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    return absl::InvalidArgumentError("support bound must be positive");
  }
  return TruncLapSpec(sensitivity, epsilon, delta, bound);
}

double TruncLapSpec::Pdf(double x) const {
  if (std::abs(x) > bound_) return 0.0;
  const double b = rate();
  // Normalizer: integral of exp(-b|x|) over [-A, A] = 2 (1 - e^{-bA}) / b.
  return b * std::exp(-b * std::abs(x)) / (-2.0 * std::expm1(-b * bound_));
}

double TruncLapSpec::Cdf(double x) const {
  if (x <= -bound_) return 0.0;
  if (x >= bound_) return 1.0;
  const double b = rate();
  const double mass = -std::expm1(-b * bound_);  // 1 - e^{-bA}
  // Mass of [0, |x|] relative to one half.
  const double half = -std::expm1(-b * std::abs(x)) / mass;
  return x < 0.0 ? 0.5 * (1.0 - half) : 0.5 * (1.0 + half);
}

double TruncLapSpec::InverseCdf(double u) const {
  const double b = rate();
  const double mass = -std::expm1(-b * bound_);
  const double half = std::abs(2.0 * u - 1.0);
  const double magnitude =
      std::min(-std::log1p(-half * mass) / b, bound_);
  return u < 0.5 ? -magnitude : magnitude;
}

double SampleTruncLap(const TruncLapSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return spec.InverseCdf(unif(rng));
}

absl::StatusOr<bool> TruncLapDpRatioCheck(const TruncLapSpec& spec,
                                          double shift, int grid) {
  if (grid < 100) return absl::InvalidArgumentError("grid must be >= 100");
  if (std::abs(shift) > spec.sensitivity()) {
    return absl::InvalidArgumentError("|shift| must not exceed sensitivity");
  }
  const double lo = -spec.bound() - spec.sensitivity();
  const double hi = spec.bound() + spec.sensitivity();
  const double width = (hi - lo) / grid;
  const double factor = std::exp(spec.epsilon());
  double excess_fwd = 0.0;
  double excess_bwd = 0.0;
  double prev_p = spec.Cdf(lo);
  double prev_q = spec.Cdf(lo - shift);
  for (int i = 1; i <= grid; ++i) {
    const double x = i == grid ? hi : lo + i * width;
    const double cp = spec.Cdf(x);
    const double cq = spec.Cdf(x - shift);
    const double p = cp - prev_p;
    const double q = cq - prev_q;
    prev_p = cp;
    prev_q = cq;
    excess_fwd += std::max(0.0, q - factor * p);
    excess_bwd += std::max(0.0, p - factor * q);
  }
  const double slack = 2.0 * spec.sensitivity() * spec.Pdf(0.0) / grid;
  const double allowed = spec.delta() + slack;
  return excess_fwd <= allowed && excess_bwd <= allowed;
}

absl::StatusOr<std::vector<double>> ExponentialMechanismProbabilities(
    std::span<const double> utilities, double sensitivity, double epsilon) {
  if (utilities.empty()) {
    return absl::InvalidArgumentError("no candidates to select from");
  }
  if (!(sensitivity > 0.0) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError("sensitivity and epsilon must be > 0");
  }
  std::vector<double> logits(utilities.size());
  for (size_t i = 0; i < utilities.size(); ++i) {
    if (!std::isfinite(utilities[i])) {
      return absl::InvalidArgumentError("utilities must be finite");
    }
    logits[i] = epsilon * utilities[i] / (2.0 * sensitivity);
  }
  const double top = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (double& l : logits) {
    l = std::exp(l - top);
    total += l;
  }
  for (double& l : logits) l /= total;
  return logits;
}

absl::StatusOr<size_t> ExponentialMechanism(std::span<const double> utilities,
                                            double sensitivity, double epsilon,
                                            Rng& rng) {
  auto probs =
      ExponentialMechanismProbabilities(utilities, sensitivity, epsilon);
  if (!probs.ok()) return probs.status();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);
  double acc = 0.0;
  size_t last_positive = 0;
  for (size_t i = 0; i < probs->size(); ++i) {
    if ((*probs)[i] <= 0.0) continue;
    last_positive = i;
    acc += (*probs)[i];
    if (u < acc) return i;
  }
  return last_positive;
}

absl::StatusOr<PrivacyBudget> AdvancedComposition(int k, double epsilon,
                                                  double delta,
                                                  double delta_prime) {
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (!(epsilon > 0.0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(delta >= 0.0)) return absl::InvalidArgumentError("delta must be >= 0");
  if (!(delta_prime > 0.0)) {
    return absl::InvalidArgumentError("delta_prime must be > 0");
  }
  const double total_eps =
      std::sqrt(2.0 * k * std::log(1.0 / delta_prime)) * epsilon +
      k * epsilon * std::expm1(epsilon);
  return PrivacyBudget{total_eps, k * delta + delta_prime};
}

}  // namespace dpgmm
