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

#ifndef DPGMM_PIPELINE_H_
#define DPGMM_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgmm/model.h"
#include "dpgmm/nets.h"
#include "dpgmm/univariate.h"
#include "json.hpp"

namespace dpgmm {

// How the fine stage turns crude information into a hypothesis class.
enum class FineMode {
  // Nets of radius G around every crude center, one private selection.
  kDirect,
  // Private localization followed by rounds of selection over shrinking
  // local nets, each round on its own slice of the fresh samples.
  kRefine,
};

absl::StatusOr<FineMode> ParseFineMode(const std::string& name);
std::string FineModeName(FineMode mode);

inline constexpr double kDefaultK = 150.0;

struct RunConfig {
  int d = 1;
  int k = 1;
  int64_t n = 0;        // crude samples; 0 derives it from K
  int64_t n_prime = 0;  // fresh samples; 0 means n_prime = n
  double epsilon = 1.0;
  double delta = 1e-6;
  double alpha = 0.2;
  std::optional<double> zeta;  // weight/net step; default alpha / k
  std::optional<double> g;     // ball radius; default n^3
  int64_t cap = 2000;
  // Local cover points per component in each refinement round.
  int64_t round_cap = 120;
  double big_k = kDefaultK;
  uint64_t seed = 0;
  int64_t max_candidates = 0;  // 0 keeps every candidate
  FineMode mode = FineMode::kRefine;
  int64_t mc_samples = 50000;

  // Fills n, n_prime and checks every field.
  absl::Status Resolve();
  // Effective ball radius and step after Resolve().
  double EffectiveG() const;
  double EffectiveZeta() const;
};

// [begin, end) of the input sample read by one stage.
struct StageRange {
  std::string stage;
  int64_t begin;
  int64_t end;
};

// True iff no two ranges overlap.
bool RangesDisjoint(const std::vector<StageRange>& ranges);

struct LearnReport {
  bool bottom = true;
  std::optional<Mixture> mixture;
  CandidateSet candidates;
  int64_t class_size = 0;
  bool truncated = false;
  std::vector<StageRange> reads;
  std::optional<double> tv;           // to the truth, when supplied
  std::optional<double> best_in_class_tv;
  nlohmann::json details = nlohmann::json::object();
};

nlohmann::json LearnReportToJson(const LearnReport& report,
                                 const RunConfig& config);

// Rows [0, n) feed the crude stage and rows [n, n + n') the fine stage.
absl::StatusOr<LearnReport> LearnUnivariate(
    const RunConfig& config, const Dataset& data,
    const std::optional<Mixture>& truth = std::nullopt);

// Runs the univariate learner on `repeats` disjoint groups of n + n_prime
// rows and returns the run whose mixture lies within 2 alpha TV of the most
// runs (at least a strict majority when one exists). Post-processing of
// disjoint private runs, so the privacy guarantee is unchanged.
absl::StatusOr<LearnReport> AmplifyUnivariate(
    const RunConfig& config, const Dataset& data, int repeats,
    const std::optional<Mixture>& truth = std::nullopt);

// Fine stage alone: the hypothesis class is built from `crude` and the
// selection reads every row of `data`.
absl::StatusOr<LearnReport> FineStage(
    const RunConfig& config, const std::vector<GaussianParams>& crude,
    const Dataset& data, const std::optional<Mixture>& truth = std::nullopt);

// NON-PRIVATE sample mean and covariance, for demonstrating the fine stage
// when no private crude estimate exists (d >= 2).
absl::StatusOr<GaussianParams> NonPrivateMoments(const Dataset& data);

// TV oracle used in reports: quadrature for d = 1, Monte Carlo otherwise.
absl::StatusOr<double> ReportTv(const Mixture& a, const Mixture& b,
                                uint64_t seed, int64_t mc_samples = 20000);

struct SweepConfig {
  RunConfig base;
  std::vector<int64_t> n_values;
  std::vector<double> eps_values;
  std::vector<double> alpha_values;
  int trials = 1;
  Mixture truth = Mixture::Single(GaussianParams::StandardNormal(1));
};

inline constexpr char kSweepHeader[] =
    "d,k,n,eps,delta,alpha,seed,trial,tv,wall_ms,class_size,bottom";

struct SweepRow {
  int d;
  int k;
  int64_t n;
  double eps;
  double delta;
  double alpha;
  uint64_t seed;
  int trial;
  double tv;  // 1 when the run returned bottom
  int64_t wall_ms;
  int64_t class_size;
  bool bottom;
};

// One learn1d run per (n, eps, alpha, trial) on fresh data from the truth.
absl::StatusOr<std::vector<SweepRow>> Sweep(const SweepConfig& config);

std::string SweepRowsToCsv(const std::vector<SweepRow>& rows);
absl::StatusOr<std::vector<SweepRow>> SweepRowsFromCsv(const std::string& text);

}  // namespace dpgmm

#endif  // DPGMM_PIPELINE_H_
