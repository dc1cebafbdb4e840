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

#include "dpgmm/select.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "dpgmm/status_macros.h"
#include "dpgmm/tvdist.h"

namespace dpgmm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Dense near the modes, geometric in the tails where two components of
// similar width can cross far out.
constexpr double kPanelSigmas[] = {0.0,  0.5,  1.0,  1.5,  2.0,   2.5,
                                   3.0,  4.0,  5.0,  6.0,  8.0,   10.0,
                                   12.0, 16.0, 24.0, 32.0, 48.0,  64.0,
                                   128.0, 256.0, 512.0, 1024.0};
constexpr int kBisectionSteps = 80;

double MixtureLogDensity1(const Mixture& m, double x) {
  return MixtureLogDensity(m, std::span<const double>(&x, 1));
}

bool Inside1(const Mixture& h_i, const Mixture& h_j, double x) {
  return MixtureLogDensity1(h_i, x) > MixtureLogDensity1(h_j, x);
}

// Points of `sorted` strictly inside (a, b).
int64_t CountInside(const std::vector<double>& sorted, double a, double b) {
  const auto lo = std::upper_bound(sorted.begin(), sorted.end(), a);
  const auto hi = std::lower_bound(sorted.begin(), sorted.end(), b);
  return hi > lo ? hi - lo : 0;
}

double IntervalCdfMass(const Mixture& m, double a, double b) {
  const double lo = a == -kInf ? 0.0 : m.Cdf1(a);
  const double hi = b == kInf ? 1.0 : m.Cdf1(b);
  return std::max(0.0, hi - lo);
}

std::vector<std::pair<double, double>> Complement(
    const std::vector<std::pair<double, double>>& intervals) {
  std::vector<std::pair<double, double>> out;
  double start = -kInf;
  for (const auto& [a, b] : intervals) {
    if (a > start) out.emplace_back(start, a);
    start = b;
  }
  if (start < kInf) out.emplace_back(start, kInf);
  return out;
}

absl::Status SameDim(const Mixture& a, const Mixture& b) {
  if (a.dim() != b.dim()) {
    return absl::InvalidArgumentError("mixtures differ in dimension");
  }
  return absl::OkStatus();
}

}  // namespace

std::string ScheffeMethodName(ScheffeMethod method) {
  return method == ScheffeMethod::kQuadrature ? "quadrature" : "monte-carlo";
}

double MixtureLogDensity(const Mixture& m, std::span<const double> x) {
  double best = -kInf;
  double terms[kDefaultMaxComponents];
  size_t count = 0;
  for (const WeightedComponent& c : m.components()) {
    if (c.weight <= 0.0) continue;
    const double t = std::log(c.weight) + c.params.LogDensity(x);
    terms[count++] = t;
    best = std::max(best, t);
  }
  if (best == -kInf) return -kInf;
  double sum = 0.0;
  for (size_t i = 0; i < count; ++i) sum += std::exp(terms[i] - best);
  return best + std::log(sum);
}

absl::StatusOr<bool> ScheffeMembership(const Mixture& h_i, const Mixture& h_j,
                                       std::span<const double> x) {
  DPGMM_RETURN_IF_ERROR(SameDim(h_i, h_j));
  if (static_cast<int>(x.size()) != h_i.dim()) {
    return absl::InvalidArgumentError("point has the wrong dimension");
  }
  return MixtureLogDensity(h_i, x) > MixtureLogDensity(h_j, x);
}

absl::StatusOr<std::vector<std::pair<double, double>>> ScheffeIntervals(
    const Mixture& h_i, const Mixture& h_j) {
  DPGMM_RETURN_IF_ERROR(SameDim(h_i, h_j));
  if (h_i.dim() != 1) {
    return absl::InvalidArgumentError("Scheffe intervals require d = 1");
  }
  std::vector<double> panel;
  for (const Mixture* m : {&h_i, &h_j}) {
    for (const WeightedComponent& c : m->components()) {
      const double mu = c.params.mean1();
      const double s = c.params.stddev1();
      for (double t : kPanelSigmas) {
        panel.push_back(mu - t * s);
        panel.push_back(mu + t * s);
      }
    }
  }
  std::sort(panel.begin(), panel.end());
  panel.erase(std::unique(panel.begin(), panel.end()), panel.end());

  std::vector<std::pair<double, double>> out;
  bool prev = Inside1(h_i, h_j, panel.front());
  double start = prev ? -kInf : 0.0;
  for (size_t p = 1; p < panel.size(); ++p) {
    const bool cur = Inside1(h_i, h_j, panel[p]);
    if (cur == prev) continue;
    double a = panel[p - 1];
    double b = panel[p];
    for (int it = 0; it < kBisectionSteps; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      (Inside1(h_i, h_j, mid) == prev ? a : b) = mid;
    }
    const double boundary = 0.5 * (a + b);
    if (prev) {
      out.emplace_back(start, boundary);
    } else {
      start = boundary;
    }
    prev = cur;
  }
  if (prev) out.emplace_back(start, kInf);
  return out;
}

absl::StatusOr<ScheffeEstimate> ScheffeMass(const Mixture& h_i,
                                            const Mixture& h_j,
                                            const Mixture& target,
                                            const ScheffeSpec& spec,
                                            const Dataset* data) {
  DPGMM_RETURN_IF_ERROR(SameDim(h_i, h_j));
  DPGMM_RETURN_IF_ERROR(SameDim(h_i, target));
  if (data != nullptr && data->d() != h_i.dim()) {
    return absl::InvalidArgumentError("data has the wrong dimension");
  }
  ScheffeEstimate est;
  if (data != nullptr) {
    int64_t inside = 0;
    for (int64_t r = 0; r < data->n(); ++r) {
      const auto x = data->row(r);
      inside += MixtureLogDensity(h_i, x) > MixtureLogDensity(h_j, x) ? 1 : 0;
    }
    est.empirical = static_cast<double>(inside) / data->n();
  }
  if (h_i.dim() == 1 && !spec.force_monte_carlo) {
    if (!(spec.tolerance > 0.0)) {
      return absl::InvalidArgumentError("tolerance must be positive");
    }
    DPGMM_ASSIGN_OR_RETURN(const auto intervals, ScheffeIntervals(h_i, h_j));
    double lo = kInf;
    double hi = -kInf;
    for (const Mixture* m : {&h_i, &h_j, &target}) {
      const auto [a, b] = m->Window1(kTailSigmas);
      lo = std::min(lo, a);
      hi = std::max(hi, b);
    }
    double covered = 0.0;
    for (const auto& [a, b] : intervals) {
      covered += std::max(0.0, std::min(b, hi) - std::max(a, lo));
    }
    double mass = 0.0;
    std::vector<double> seeds;
    for (const WeightedComponent& c : target.components()) {
      for (double t : kPanelSigmas) {
        seeds.push_back(c.params.mean1() - t * c.params.stddev1());
        seeds.push_back(c.params.mean1() + t * c.params.stddev1());
      }
    }
    for (const auto& [a, b] : intervals) {
      const double ca = std::max(a, lo);
      const double cb = std::min(b, hi);
      if (!(cb > ca)) continue;
      mass += AdaptiveSimpson([&](double x) { return target.Density1(x); },
                              ca, cb, spec.tolerance * (cb - ca) / covered,
                              seeds);
    }
    est.mass = std::clamp(mass, 0.0, 1.0);
    est.method = ScheffeMethod::kQuadrature;
    return est;
  }
  if (spec.mc_samples < 2) {
    return absl::InvalidArgumentError("need at least two Monte Carlo draws");
  }
  DPGMM_ASSIGN_OR_RETURN(const Dataset draws,
                         Sample(target, spec.mc_samples, spec.seed));
  int64_t inside = 0;
  for (int64_t r = 0; r < draws.n(); ++r) {
    const auto x = draws.row(r);
    inside += MixtureLogDensity(h_i, x) > MixtureLogDensity(h_j, x) ? 1 : 0;
  }
  const double p = static_cast<double>(inside) / draws.n();
  est.mass = p;
  est.method = ScheffeMethod::kMonteCarlo;
  est.mc_stderr = std::sqrt(p * (1.0 - p) / draws.n());
  return est;
}

absl::StatusOr<std::vector<double>> MdeScores(
    std::span<const Mixture> hypotheses, const Dataset& data,
    const MdeOptions& options) {
  const size_t m = hypotheses.size();
  if (m == 0) return absl::InvalidArgumentError("empty hypothesis class");
  const int d = hypotheses.front().dim();
  for (const Mixture& h : hypotheses) {
    if (h.dim() != d) {
      return absl::InvalidArgumentError("hypotheses differ in dimension");
    }
  }
  if (data.d() != d) {
    return absl::InvalidArgumentError("data has the wrong dimension");
  }
  const double n = static_cast<double>(data.n());
  std::vector<double> scores(m, 0.0);

  if (d == 1) {
    std::vector<double> sorted = data.values();
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = i + 1; j < m; ++j) {
        // A_ji is the complement of A_ij up to the null set of ties.
        DPGMM_ASSIGN_OR_RETURN(
            const auto a_ij, ScheffeIntervals(hypotheses[i], hypotheses[j]));
        const auto a_ji = Complement(a_ij);
        double mass_i = 0.0;
        int64_t emp_ij = 0;
        for (const auto& [a, b] : a_ij) {
          mass_i += IntervalCdfMass(hypotheses[i], a, b);
          emp_ij += CountInside(sorted, a, b);
        }
        double mass_j = 0.0;
        int64_t emp_ji = 0;
        for (const auto& [a, b] : a_ji) {
          mass_j += IntervalCdfMass(hypotheses[j], a, b);
          emp_ji += CountInside(sorted, a, b);
        }
        scores[i] = std::max(scores[i], std::abs(mass_i - emp_ij / n));
        scores[j] = std::max(scores[j], std::abs(mass_j - emp_ji / n));
      }
    }
    return scores;
  }

  if (options.mc_samples < 2) {
    return absl::InvalidArgumentError("need at least two Monte Carlo draws");
  }
  // log f_l at every data point.
  std::vector<std::vector<double>> data_logf(m, std::vector<double>(data.n()));
  for (size_t l = 0; l < m; ++l) {
    for (int64_t r = 0; r < data.n(); ++r) {
      data_logf[l][r] = MixtureLogDensity(hypotheses[l], data.row(r));
    }
  }
  std::vector<double> draw_logf(options.mc_samples);
  for (size_t i = 0; i < m; ++i) {
    DPGMM_ASSIGN_OR_RETURN(
        const Dataset draws,
        Sample(hypotheses[i], options.mc_samples,
               DeriveSeed(options.seed, i, 0)));
    std::vector<double> own(options.mc_samples);
    for (int64_t r = 0; r < draws.n(); ++r) {
      own[r] = MixtureLogDensity(hypotheses[i], draws.row(r));
    }
    for (size_t j = 0; j < m; ++j) {
      if (j == i) continue;
      int64_t inside = 0;
      for (int64_t r = 0; r < draws.n(); ++r) {
        inside += own[r] > MixtureLogDensity(hypotheses[j], draws.row(r));
      }
      int64_t emp = 0;
      for (int64_t r = 0; r < data.n(); ++r) {
        emp += data_logf[i][r] > data_logf[j][r];
      }
      const double mass = static_cast<double>(inside) / draws.n();
      scores[i] = std::max(scores[i], std::abs(mass - emp / n));
    }
  }
  return scores;
}

nlohmann::json SelectionReportToJson(const SelectionReport& report) {
  return {{"chosen", report.chosen},
          {"scores", report.scores},
          {"epsilon", report.epsilon},
          {"n", report.n}};
}

absl::StatusOr<SelectionReport> PrivateSelect(
    std::span<const Mixture> hypotheses, const Dataset& data, double epsilon,
    Rng& rng, const MdeOptions& options) {
  if (hypotheses.empty()) {
    return absl::InvalidArgumentError("empty hypothesis class");
  }
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  SelectionReport report;
  report.epsilon = epsilon;
  report.n = data.n();
  DPGMM_ASSIGN_OR_RETURN(report.scores, MdeScores(hypotheses, data, options));
  std::vector<double> utilities(report.scores.size());
  for (size_t i = 0; i < utilities.size(); ++i) {
    utilities[i] = -static_cast<double>(data.n()) * report.scores[i];
  }
  DPGMM_ASSIGN_OR_RETURN(report.chosen,
                         ExponentialMechanism(utilities, 1.0, epsilon, rng));
  return report;
}

}  // namespace dpgmm
