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

// Acceptance run: one PASS/FAIL line per criterion with its measured
// runtime. Criteria named by --xfail are expected to fail for documented
// reasons; the exit code is nonzero only for unexpected outcomes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "dpgmm/audit.h"
#include "dpgmm/mech.h"
#include "dpgmm/model.h"
#include "dpgmm/nets.h"
#include "dpgmm/pipeline.h"
#include "dpgmm/select.h"
#include "dpgmm/tvdist.h"
#include "dpgmm/univariate.h"

namespace dpgmm {
namespace {

constexpr uint64_t kSeed = 20260101;

struct Outcome {
  bool passed;
  std::string detail;
};

GaussianParams Uni(double mean, double var) {
  return GaussianParams::Univariate(mean, var).value();
}

double Uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Outcome Combine(const std::vector<AuditLine>& lines) {
  Outcome out{true, ""};
  for (const AuditLine& l : lines) {
    out.passed = out.passed && l.passed;
    absl::StrAppend(&out.detail, out.detail.empty() ? "" : " | ",
                    l.passed ? "ok " : "FAILED ", l.name, ": ", l.detail);
  }
  return out;
}

Outcome Sensitivity() {
  return Combine({AuditSensitivity(DeriveSeed(kSeed, 1), 10000, 50)});
}

Outcome TruncatedLaplace() {
  return Combine({AuditTruncLapSupport(DeriveSeed(kSeed, 2), 20, 1000000),
                  AuditTruncLapGrid(),
                  AuditTruncLapRatio(DeriveSeed(kSeed, 3), 20)});
}

Outcome CandidateSize() {
  return Combine({AuditCandidateSize(DeriveSeed(kSeed, 4), 100)});
}

Outcome CrudeRecovery() {
  constexpr int64_t kN = 30000;
  const Mixture truth = Mixture::Create({{0.5, Uni(0, 1)},
                                         {0.3, Uni(200, 25)},
                                         {0.2, Uni(-500, 0.01)}})
                            .value();
  const double n4 = std::pow(static_cast<double>(kN), 4);
  const double n5 = static_cast<double>(FifthPower(kN).value());
  int good = 0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Dataset data = Sample(truth, kN, DeriveSeed(kSeed, 40, seed)).value();
    Rng rng(DeriveSeed(kSeed, 41, seed));
    const CandidateSet s = NoisyCandidates(data, {1.0, 1e-6}, rng).value();
    bool all = true;
    for (const WeightedComponent& c : truth.components()) {
      const double mu = c.params.mean1();
      const double sigma = c.params.stddev1();
      bool hit = false;
      for (const Candidate& cand : s) {
        const double scale = std::sqrt(cand.var);
        hit = hit || (scale >= sigma / (1e5 * n4) && scale <= 2 * sigma &&
                      cand.mu >= mu - sigma - n5 * scale &&
                      cand.mu <= mu + sigma);
      }
      all = all && hit;
    }
    good += all;
  }
  return {good >= 18, absl::StrFormat("%d/20 seeds recover all three "
                                      "components (need 18)",
                                      good)};
}

Outcome NetCovering() {
  const CrudeBall ball = CrudeBall::Create(Uni(0, 1), 4.0).value();
  const std::vector<GaussianParams> net = GaussianCover(ball, 0.1, 1).value();
  Rng rng(DeriveSeed(kSeed, 5));
  double worst = 0.0;
  int misses = 0;
  for (int t = 0; t < 500; ++t) {
    const GaussianParams p =
        Uni(Uniform(-4, 4, rng), std::exp(Uniform(std::log(0.25),
                                                   std::log(4.0), rng)));
    const Mixture target = Mixture::Single(p);
    double best = 1.0;
    for (const GaussianParams& q : net) {
      // Means 3 sigma_max apart put TV above 2 Phi(1.5) - 1 > 0.86, so such
      // points never decide the check.
      if (std::abs(p.mean1() - q.mean1()) >
          3 * std::max(p.stddev1(), q.stddev1())) {
        continue;
      }
      best = std::min(best,
                      TvUnivariate(target, Mixture::Single(q)).value().value);
    }
    worst = std::max(worst, best);
    misses += best > 0.1;
  }
  return {misses == 0,
          absl::StrFormat("net of %d points; 500 in-ball targets; worst "
                          "min-TV %.4f (bound 0.1); misses %d",
                          net.size(), worst, misses)};
}

Outcome SelectionRate() {
  int good = 0;
  double worst = 0.0;
  for (uint64_t trial = 0; trial < 20; ++trial) {
    Rng rng(DeriveSeed(kSeed, 60, trial));
    // Overlapping hypotheses so that near-optimal alternatives exist.
    std::vector<Mixture> h;
    for (int i = 0; i < 50; ++i) {
      const double w = Uniform(0.2, 0.8, rng);
      h.push_back(
          Mixture::Create(
              {{w, Uni(Uniform(-4, 4, rng),
                       std::exp(Uniform(std::log(0.25), std::log(4.0), rng)))},
               {1 - w, Uni(Uniform(-4, 4, rng),
                           std::exp(Uniform(std::log(0.25), std::log(4.0),
                                            rng)))}})
              .value());
    }
    const size_t planted = trial % h.size();
    const Dataset data =
        Sample(h[planted], 5000, DeriveSeed(kSeed, 61, trial)).value();
    double opt = 1.0;
    for (const Mixture& m : h) {
      opt = std::min(opt, TvUnivariate(h[planted], m).value().value);
    }
    const SelectionReport r = PrivateSelect(h, data, 1.0, rng).value();
    const double tv = TvUnivariate(h[planted], h[r.chosen]).value().value;
    worst = std::max(worst, tv);
    good += tv <= 4 * opt + 0.1;
  }
  return {good >= 18,
          absl::StrFormat("%d/20 trials with TV <= 4 OPT + 0.1 (need 18); "
                          "worst TV %.4f",
                          good, worst)};
}

Outcome EndToEnd() {
  const Mixture truth =
      Mixture::Create({{0.5, Uni(0, 1)}, {0.5, Uni(100, 25)}}).value();
  std::vector<double> tvs;
  double slowest = 0.0;
  int bottoms = 0;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    RunConfig c;
    c.k = 2;
    c.n = 20000;
    c.n_prime = 20000;
    c.epsilon = 1.0;
    c.delta = 1e-6;
    c.alpha = 0.2;
    c.seed = DeriveSeed(kSeed, 70, seed);
    const auto start = std::chrono::steady_clock::now();
    const Dataset data = Sample(truth, 40000, DeriveSeed(c.seed, 99)).value();
    const LearnReport r = LearnUnivariate(c, data, truth).value();
    slowest = std::max(
        slowest, std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count());
    bottoms += r.bottom;
    tvs.push_back(r.bottom ? 1.0 : *r.tv);
  }
  std::vector<double> sorted = tvs;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[4] + sorted[5]);
  std::string list;
  for (double v : tvs) absl::StrAppendFormat(&list, "%s%.3f", list.empty() ? "" : ",", v);
  return {median <= 0.2 && slowest < 300.0,
          absl::StrFormat("median TV %.4f over 10 seeds (bound 0.2); TVs "
                          "[%s]; bottoms %d; slowest seed %.1f s (bound 300)",
                          median, list, bottoms, slowest)};
}

Outcome Geometry() {
  return Combine({AuditDetRatio(DeriveSeed(kSeed, 8), 1000),
                  AuditJmj(DeriveSeed(kSeed, 9), 1000),
                  AuditApproxMetric(DeriveSeed(kSeed, 10), 1000),
                  AuditNvolInvariance(DeriveSeed(kSeed, 11), 400000),
                  AuditNvolClosedForm(DeriveSeed(kSeed, 12), 200000)});
}

Mixture RandomMixture(Rng& rng) {
  const int k = std::uniform_int_distribution<int>(1, 3)(rng);
  std::vector<double> w(k);
  double total = 0;
  for (double& v : w) total += (v = Uniform(0.2, 1.0, rng));
  std::vector<WeightedComponent> comps;
  for (int i = 0; i < k; ++i) {
    comps.push_back({w[i] / total,
                     Uni(Uniform(-5, 5, rng),
                         std::exp(Uniform(std::log(0.1), std::log(10.0), rng)))});
  }
  return Mixture::Create(std::move(comps)).value();
}

Outcome OracleEquivalence() {
  Rng rng(DeriveSeed(kSeed, 13));
  int disagreements = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Mixture a = RandomMixture(rng);
    const Mixture b = RandomMixture(rng);
    const TVEstimate q = TvUnivariate(a, b).value();
    const TVEstimate m = TvMonteCarlo(a, b, 50000, DeriveSeed(kSeed, 14, t)).value();
    const double ratio =
        std::abs(q.value - m.value) / (q.error_bound + m.error_bound);
    worst = std::max(worst, ratio);
    disagreements += ratio > 1.0;
  }
  return {disagreements == 0,
          absl::StrFormat("100 pairs; disagreements %d; max |diff| / "
                          "(sum of error bounds) %.3f",
                          disagreements, worst)};
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

int Main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> xfail;
  std::vector<int> only;
  app.add_option("--xfail", xfail,
                 "criteria expected to fail for documented reasons")
      ->delimiter(',');
  app.add_option("--only", only, "run only these criteria")->delimiter(',');
  CLI11_PARSE(app, argc, argv);
  const std::set<int> expected_fail(xfail.begin(), xfail.end());
  const std::set<int> selected(only.begin(), only.end());

  const std::vector<Criterion> criteria = {
      {1, "sensitivity", 60, Sensitivity},
      {2, "truncated-laplace", 60, TruncatedLaplace},
      {3, "candidate-size", 10, CandidateSize},
      {4, "crude-recovery", 120, CrudeRecovery},
      {5, "net-covering", 120, NetCovering},
      {6, "selection-rate", 300, SelectionRate},
      {7, "end-to-end", 3000, EndToEnd},
      {8, "geometry-lemmas", 180, Geometry},
      {9, "oracle-equivalence", 120, OracleEquivalence},
  };
  int passed = 0;
  int ran = 0;
  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o = c.run();
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    const bool in_time = secs < c.limit_seconds;
    const bool ok = o.passed && in_time;
    const bool xf = expected_fail.contains(c.id);
    ++ran;
    passed += ok;
    unexpected += ok == xf;
    std::printf("%s criterion %d (%s): %s; runtime %.1f s (limit %.0f s)%s\n",
                ok ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(),
                secs, c.limit_seconds,
                xf ? (ok ? " [expected to fail, but passed]"
                         : " [expected failure, see README]")
                   : "");
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%d criteria passed; %d unexpected outcome(s)\n",
              passed, ran, unexpected);
  return unexpected == 0 ? 0 : 1;
}

}  // namespace
}  // namespace dpgmm

int main(int argc, char** argv) { return dpgmm::Main(argc, argv); }
