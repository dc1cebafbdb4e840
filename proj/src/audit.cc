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

#include "dpgmm/audit.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpgmm/geometry.h"
#include "dpgmm/mech.h"
#include "dpgmm/model.h"
#include "dpgmm/univariate.h"

namespace dpgmm {
namespace {

double LogUniform(double lo, double hi, Rng& rng) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double Uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Nondecreasing sequences of length n over {0, ..., top}.
void ForEachMultiset(int n, int top, std::vector<double>& cur,
                     const std::function<void(const std::vector<double>&)>& f) {
  if (static_cast<int>(cur.size()) == n) {
    f(cur);
    return;
  }
  const int start = cur.empty() ? 0 : static_cast<int>(cur.back());
  for (int v = start; v <= top; ++v) {
    cur.push_back(v);
    ForEachMultiset(n, top, cur, f);
    cur.pop_back();
  }
}

struct SensitivityTally {
  int64_t pairs = 0;
  int64_t worst_distance = 0;
  int64_t worst_l1 = 0;
  int64_t errors = 0;

  void Add(const std::vector<double>& x, const std::vector<double>& y) {
    ++pairs;
    const Dataset dx = Dataset::FromColumn(x).value();
    const Dataset dy = Dataset::FromColumn(y).value();
    const absl::StatusOr<int64_t> dist =
        MultisetDistance(ConsecutivePairs(dx).value(),
                         ConsecutivePairs(dy).value());
    const absl::StatusOr<int64_t> l1 = CountL1Sensitivity(dx, dy);
    if (!dist.ok() || !l1.ok()) {
      ++errors;
      return;
    }
    worst_distance = std::max(worst_distance, *dist);
    worst_l1 = std::max(worst_l1, *l1);
  }
};

double RandomValue(Rng& rng) {
  std::normal_distribution<double> normal;
  const double scale = LogUniform(1e-3, 1e3, rng);
  double v = scale * normal(rng);
  // Coarse rounding produces ties and zero gaps.
  if (Uniform(0, 1, rng) < 0.3) v = std::round(v * 10.0) / 10.0;
  return v;
}

GaussianParams RandomGaussian(int d, Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd mu(d);
  for (int i = 0; i < d; ++i) mu(i) = 3.0 * normal(rng);
  return GaussianParams::Create(mu, RandomSpd(d, 0.2, 5.0, rng)).value();
}

// A point within (gamma, rho, tau) of `base`, built in base's frame with a
// small safety margin.
GaussianParams RandomNear(const GaussianParams& base, const ApproxParams& p,
                          Rng& rng) {
  const int d = base.dim();
  constexpr double kMargin = 0.999;
  Eigen::MatrixXd e =
      RandomSymmetric(d, kMargin * p.gamma * Uniform(0.0, 1.0, rng), rng);
  if (e.norm() > kMargin * p.rho) e *= kMargin * p.rho / e.norm();
  std::normal_distribution<double> normal;
  Eigen::VectorXd dir(d);
  for (int i = 0; i < d; ++i) dir(i) = normal(rng);
  const Eigen::VectorXd mu0 =
      dir.normalized() * kMargin * p.tau * Uniform(0.0, 1.0, rng);
  const GaussianParams local =
      GaussianParams::Create(mu0, Eigen::MatrixXd::Identity(d, d) + e)
          .value();
  return AffinePush(local, base.mean(), base.cov()).value();
}

ApproxParams RandomParams(int d, Rng& rng) {
  const double gamma = Uniform(0.001, 0.1, rng);
  const double rho = gamma * Uniform(0.3, std::sqrt(static_cast<double>(d)),
                                     rng);
  const double tau = Uniform(0.001, 0.5, rng);
  return {gamma, rho, tau};
}

AuditLine Verdict(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

}  // namespace

AuditLine AuditSensitivity(uint64_t seed, int random_pairs, int n) {
  SensitivityTally exhaustive;
  std::vector<double> cur;
  for (int size = 2; size <= 6; ++size) {
    ForEachMultiset(size, 4, cur, [&](const std::vector<double>& x) {
      for (int i = 0; i < size; ++i) {
        for (int v = 0; v <= 4; ++v) {
          if (v == x[i]) continue;
          std::vector<double> y = x;
          y[i] = v;
          exhaustive.Add(x, y);
        }
      }
    });
  }
  SensitivityTally random;
  Rng rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int t = 0; t < random_pairs; ++t) {
    std::vector<double> x(n);
    for (double& v : x) v = RandomValue(rng);
    std::vector<double> y = x;
    y[pick(rng)] = RandomValue(rng);
    random.Add(x, y);
  }
  const int64_t dist =
      std::max(exhaustive.worst_distance, random.worst_distance);
  const int64_t l1 = std::max(exhaustive.worst_l1, random.worst_l1);
  const bool ok = dist <= 3 && l1 <= 6 && exhaustive.errors == 0 &&
                  random.errors == 0;
  return Verdict(
      "sensitivity", ok,
      absl::StrFormat("%d exhaustive + %d random pairs; max distance %d "
                      "(bound 3), max l1 %d (bound 6), errors %d",
                      exhaustive.pairs, random.pairs, dist, l1,
                      exhaustive.errors + random.errors));
}

AuditLine AuditTruncLapSupport(uint64_t seed, int specs, int64_t draws) {
  Rng rng(seed);
  int64_t violations = 0;
  double worst_ratio = 0.0;
  for (int s = 0; s < specs; ++s) {
    const auto spec =
        TruncLapSpec::Create(LogUniform(0.1, 10.0, rng),
                             LogUniform(0.01, 2.0, rng),
                             LogUniform(1e-12, 0.5, rng))
            .value();
    for (int64_t i = 0; i < draws; ++i) {
      const double x = std::abs(SampleTruncLap(spec, rng));
      worst_ratio = std::max(worst_ratio, x / spec.bound());
      violations += x > spec.bound() ? 1 : 0;
    }
  }
  return Verdict("tlap-support", violations == 0,
                 absl::StrFormat("%d specs x %d draws; violations %d; max "
                                 "|x|/A = %.9f",
                                 specs, draws, violations, worst_ratio));
}

AuditLine AuditTruncLapGrid() {
  int violations = 0;
  double min_bad_delta = 2.0;
  double worst_excess = 0.0;
  for (int i = 1; i <= 50; ++i) {
    for (int j = 1; j <= 50; ++j) {
      const double eps = i / 50.0;
      const double delta = j / 50.0;
      const double a = TruncLapBound(1.0, eps / 10.0, delta / 10.0);
      const double rhs = 100.0 / eps * std::log(1.0 / delta);
      if (a > rhs) {
        ++violations;
        min_bad_delta = std::min(min_bad_delta, delta);
        worst_excess = std::max(worst_excess, a - rhs);
      }
    }
  }
  std::string detail = absl::StrFormat("2500 grid points; violations %d",
                                       violations);
  if (violations > 0) {
    absl::StrAppendFormat(
        &detail,
        " (all at delta >= %.2f, largest excess %.4f; the bound fails as "
        "ln(1/delta) -> 0)",
        min_bad_delta, worst_excess);
  }
  return Verdict("tlap-bound-grid", violations == 0, detail);
}

AuditLine AuditTruncLapRatio(uint64_t seed, int specs) {
  Rng rng(seed);
  int failures = 0;
  for (int s = 0; s < specs; ++s) {
    const double sensitivity = Uniform(0.5, 2.0, rng);
    const auto spec = TruncLapSpec::Create(sensitivity,
                                           Uniform(0.05, 1.0, rng),
                                           LogUniform(1e-9, 0.1, rng))
                          .value();
    const double shift = sensitivity * Uniform(-1.0, 1.0, rng);
    const absl::StatusOr<bool> ok = TruncLapDpRatioCheck(spec, shift, 200000);
    failures += (ok.ok() && *ok) ? 0 : 1;
  }
  return Verdict("tlap-dp-ratio", failures == 0,
                 absl::StrFormat("%d specs; failures %d", specs, failures));
}

AuditLine AuditCandidateSize(uint64_t seed, int datasets) {
  Rng rng(seed);
  int violations = 0;
  int errors = 0;
  int64_t total = 0;
  int64_t worst_slack = INT64_MAX;
  for (int t = 0; t < datasets; ++t) {
    const int64_t n =
        static_cast<int64_t>(LogUniform(2.0, 20000.0, rng));
    std::vector<double> x(n);
    const int kind = t % 4;
    std::normal_distribution<double> normal;
    for (double& v : x) {
      switch (kind) {
        case 0:
          v = (Uniform(0, 1, rng) < 0.5 ? -50.0 : 50.0) + normal(rng);
          break;
        case 1:
          v = std::floor(Uniform(0.0, 20.0, rng));
          break;
        case 2:
          v = 7.0;
          break;
        default:
          v = -std::log(Uniform(1e-300, 1.0, rng)) * 1e-3;
      }
    }
    const PrivacyBudget budget{Uniform(0.05, 1.0, rng),
                               LogUniform(1e-9, 0.5, rng)};
    const absl::StatusOr<CandidateSet> s =
        NoisyCandidates(Dataset::FromColumn(x).value(), budget, rng);
    if (!s.ok()) {
      ++errors;
      continue;
    }
    total += s->size();
    worst_slack =
        std::min<int64_t>(worst_slack, n - 1 - static_cast<int64_t>(s->size()));
    bool ok = static_cast<int64_t>(s->size()) <= n - 1;
    for (const Candidate& c : *s) {
      ok = ok && c.var == std::ldexp(1.0, 2 * static_cast<int>(c.key.a));
    }
    violations += ok ? 0 : 1;
  }
  return Verdict("candidate-size", violations == 0 && errors == 0,
                 absl::StrFormat("%d datasets; %d candidates in total; "
                                 "violations %d; errors %d; min (n-1-|S|) %d",
                                 datasets, total, violations, errors,
                                 worst_slack));
}

AuditLine AuditGapRegularity(uint64_t seed, int seeds) {
  constexpr int64_t kN = 200;
  constexpr int kWindow = 20;
  const double big_l = 100.0 * kN * kN;
  const Mixture standard = Mixture::Single(GaussianParams::StandardNormal(1));
  int failures = 0;
  double narrowest = INFINITY;
  for (int s = 0; s < seeds; ++s) {
    std::vector<double> y =
        Sample(standard, kN, DeriveSeed(seed, s)).value().values();
    std::sort(y.begin(), y.end());
    bool ok = std::max(std::abs(y.front()), std::abs(y.back())) <= big_l;
    for (int64_t i = 0; i + kWindow - 1 < kN; ++i) {
      const double width = y[i + kWindow - 1] - y[i];
      narrowest = std::min(narrowest, width);
      ok = ok && width > 2.0 / big_l;
    }
    failures += ok ? 0 : 1;
  }
  return Verdict("gap-regularity", failures == 0,
                 absl::StrFormat("%d seeds; failures %d; narrowest window "
                                 "%.3g vs 2/L = %.3g",
                                 seeds, failures, narrowest, 2.0 / big_l));
}

AuditLine AuditDetRatio(uint64_t seed, int trials) {
  Rng rng(seed);
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    const int d = std::uniform_int_distribution<int>(1, 8)(rng);
    const Eigen::MatrixXd m =
        RandomSymmetric(d, 0.1 * Uniform(0.0, 1.0, rng), rng);
    const auto r = DetRatioBounds(m, Uniform(1.0, 2.0, rng));
    if (!r.ok() || r->ratio < r->lower * (1.0 - 1e-12) ||
        r->ratio > r->upper * (1.0 + 1e-12)) {
      ++violations;
    }
  }
  return Verdict("det-ratio", violations == 0,
                 absl::StrFormat("%d trials, d <= 8; violations %d", trials,
                                 violations));
}

AuditLine AuditJmj(uint64_t seed, int trials) {
  Rng rng(seed);
  int violations = 0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int d = std::uniform_int_distribution<int>(1, 6)(rng);
    const Eigen::MatrixXd m =
        RandomSymmetric(d, LogUniform(0.01, 10.0, rng), rng);
    const Eigen::MatrixXd j = RandomWithSingularValues(d, 0.9, 1.1, rng);
    const auto r = JmjCheck(m, j);
    if (!r.ok() || !r->holds) {
      ++violations;
      continue;
    }
    worst = std::max(worst, r->lhs / r->rhs);
  }
  return Verdict("jmj", violations == 0,
                 absl::StrFormat("%d trials, d <= 6; violations %d; max "
                                 "lhs/rhs %.4f",
                                 trials, violations, worst));
}

AuditLine AuditApproxMetric(uint64_t seed, int trials) {
  Rng rng(seed);
  int premise_failures = 0;
  int symmetry_violations = 0;
  int transitivity_violations = 0;
  for (int t = 0; t < trials; ++t) {
    const int d = std::uniform_int_distribution<int>(1, 5)(rng);
    const ApproxParams p = RandomParams(d, rng);
    const GaussianParams p3 = RandomGaussian(d, rng);
    const GaussianParams p2 = RandomNear(p3, p, rng);
    const GaussianParams p1 = RandomNear(p2, p, rng);
    if (!ApproxCheck(p1, p2, p).value() || !ApproxCheck(p2, p3, p).value()) {
      ++premise_failures;
      continue;
    }
    symmetry_violations += ApproxCheck(p2, p1, p.Scaled(2.0)).value() ? 0 : 1;
    transitivity_violations +=
        ApproxCheck(p1, p3, p.Scaled(4.0)).value() ? 0 : 1;
  }
  return Verdict(
      "approx-symmetry-transitivity",
      premise_failures == 0 && symmetry_violations == 0 &&
          transitivity_violations == 0,
      absl::StrFormat("%d tuples, d <= 5, gamma <= 0.1; premise failures %d; "
                      "symmetry (2x) violations %d; transitivity (4x) "
                      "violations %d",
                      trials, premise_failures, symmetry_violations,
                      transitivity_violations));
}

AuditLine AuditApproxPushInvariance(uint64_t seed, int trials) {
  Rng rng(seed);
  int mismatches = 0;
  int borderline = 0;
  double worst_rel = 0.0;
  for (int t = 0; t < trials; ++t) {
    const int d = std::uniform_int_distribution<int>(1, 4)(rng);
    const GaussianParams b = RandomGaussian(d, rng);
    const GaussianParams h = RandomNear(b, {0.3, 0.3 * d, 1.0}, rng);
    const ApproxDistances before = ComputeApproxDistances(h, b).value();
    const ApproxParams p{before.spectral * Uniform(0.8, 1.2, rng),
                         before.frobenius * Uniform(0.8, 1.2, rng),
                         before.mahalanobis * Uniform(0.8, 1.2, rng)};
    const GaussianParams shift = RandomGaussian(d, rng);
    const GaussianParams hp =
        AffinePush(h, shift.mean(), shift.cov()).value();
    const GaussianParams bp =
        AffinePush(b, shift.mean(), shift.cov()).value();
    const ApproxDistances after = ComputeApproxDistances(hp, bp).value();
    const double pairs[3][3] = {
        {before.spectral, after.spectral, p.gamma},
        {before.frobenius, after.frobenius, p.rho},
        {before.mahalanobis, after.mahalanobis, p.tau}};
    bool near_threshold = false;
    for (const auto& row : pairs) {
      worst_rel = std::max(worst_rel,
                           std::abs(row[0] - row[1]) / (1e-12 + row[0]));
      near_threshold =
          near_threshold || std::abs(row[0] - row[2]) <= 1e-9 * (1 + row[2]);
    }
    if (near_threshold) {
      ++borderline;
      continue;
    }
    mismatches += ApproxCheck(h, b, p).value() == ApproxCheck(hp, bp, p).value()
                      ? 0
                      : 1;
  }
  return Verdict("approx-push-invariance",
                 mismatches == 0 && worst_rel <= 1e-6,
                 absl::StrFormat("%d tuples, d <= 4; mismatches %d; "
                                 "borderline skipped %d; max relative "
                                 "distance change %.2g",
                                 trials, mismatches, borderline, worst_rel));
}

AuditLine AuditNvolInvariance(uint64_t seed, int64_t samples) {
  constexpr double kGamma = 0.3;
  Rng rng(seed);
  bool ok = true;
  std::string detail;
  for (int d = 1; d <= 2; ++d) {
    const ApproxParams p = ApproxParams::Spectral(kGamma, kGamma, d).value();
    const GaussianParams origin = GaussianParams::StandardNormal(d);
    ParamRegion s;
    s.d = d;
    ApproxBallBox(origin, kGamma, kGamma, &s.lo, &s.hi);
    s.contains = [p, origin](const GaussianParams& q) {
      return ApproxCheck(q, origin, p).value();
    };
    const GaussianParams h = RandomGaussian(d, rng);
    // Membership in h(S): pull back by h and test against S.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.cov());
    const Eigen::MatrixXd w = es.eigenvectors() *
                              es.eigenvalues().cwiseInverse().cwiseSqrt()
                                  .asDiagonal() *
                              es.eigenvectors().transpose();
    ParamRegion hs;
    hs.d = d;
    ApproxBallBox(h, kGamma, kGamma, &hs.lo, &hs.hi);
    hs.contains = [p, origin, w, h](const GaussianParams& q) {
      Eigen::MatrixXd c = w * q.cov() * w;
      c = 0.5 * (c + c.transpose());
      const absl::StatusOr<GaussianParams> back =
          GaussianParams::Create(w * (q.mean() - h.mean()), c);
      return back.ok() && ApproxCheck(*back, origin, p).value();
    };
    const McEstimate a = NvolMc(s, samples, DeriveSeed(seed, d, 1)).value();
    const McEstimate b = NvolMc(hs, samples, DeriveSeed(seed, d, 2)).value();
    const double combined = std::hypot(a.std_error, b.std_error);
    const bool pass = std::abs(a.value - b.value) <= 3.0 * combined;
    ok = ok && pass;
    absl::StrAppendFormat(&detail, "%sd=%d: nvol(S)=%.5g, nvol(h(S))=%.5g, "
                          "|diff|/combined stderr=%.2f",
                          d == 1 ? "" : "; ", d, a.value, b.value,
                          std::abs(a.value - b.value) / combined);
  }
  return Verdict("nvol-affine-invariance", ok, detail);
}

AuditLine AuditNvolClosedForm(uint64_t seed, int64_t samples) {
  ParamRegion box;
  box.d = 1;
  box.lo = Eigen::Vector2d(0.0, 1.0);
  box.hi = Eigen::Vector2d(1.0, 2.0);
  const McEstimate est = NvolMc(box, samples, seed).value();
  const double exact = 2.0 - std::sqrt(2.0);
  const bool ok = std::abs(est.value - exact) <= 3.0 * est.std_error;
  return Verdict("nvol-closed-form", ok,
                 absl::StrFormat("estimate %.6f +- %.6f, exact %.6f",
                                 est.value, est.std_error, exact));
}

std::vector<AuditLine> RunAllAudits(uint64_t seed) {
  return {AuditSensitivity(DeriveSeed(seed, 1)),
          AuditTruncLapSupport(DeriveSeed(seed, 2)),
          AuditTruncLapGrid(),
          AuditTruncLapRatio(DeriveSeed(seed, 3)),
          AuditCandidateSize(DeriveSeed(seed, 4)),
          AuditGapRegularity(DeriveSeed(seed, 5)),
          AuditDetRatio(DeriveSeed(seed, 6)),
          AuditJmj(DeriveSeed(seed, 7)),
          AuditApproxMetric(DeriveSeed(seed, 8)),
          AuditApproxPushInvariance(DeriveSeed(seed, 9)),
          AuditNvolInvariance(DeriveSeed(seed, 10)),
          AuditNvolClosedForm(DeriveSeed(seed, 11))};
}

}  // namespace dpgmm
