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

#ifndef DPGMM_AUDIT_H_
#define DPGMM_AUDIT_H_

#include <cstdint>
#include <string>
#include <vector>

namespace dpgmm {

// Outcome of one randomized or exhaustive lemma check.
struct AuditLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Multiset distance <= 3 and bucket-count l1 <= 6 for adjacent univariate
// datasets: every multiset over {0..4} of size 2..6 with every single
// replacement, plus `random_pairs` real-valued pairs of size `n`.
AuditLine AuditSensitivity(uint64_t seed, int random_pairs = 10000,
                           int n = 50);

// Truncated Laplace: support bound over `draws` samples for each of `specs`
// random specs.
AuditLine AuditTruncLapSupport(uint64_t seed, int specs = 20,
                               int64_t draws = 1000000);

// A(1, eps/10, delta/10) <= (100/eps) ln(1/delta) on the grid
// eps, delta in {1/50, ..., 50/50}.
AuditLine AuditTruncLapGrid();

// Discretized (eps, delta)-DP inequality for `specs` random specs.
AuditLine AuditTruncLapRatio(uint64_t seed, int specs = 20);

// |S| <= n - 1 and every variance an exact power of 4 on random datasets.
AuditLine AuditCandidateSize(uint64_t seed, int datasets = 100);

// No 20 consecutive sorted points of 200 standard normal draws within
// 2 / (100 n^2), and max |X| <= 100 n^2, over `seeds` seeds.
AuditLine AuditGapRegularity(uint64_t seed, int seeds = 100);

AuditLine AuditDetRatio(uint64_t seed, int trials = 1000);
AuditLine AuditJmj(uint64_t seed, int trials = 1000);
// Symmetry with factor 2 and transitivity with factor 4 for gamma <= 0.1.
AuditLine AuditApproxMetric(uint64_t seed, int trials = 1000);
// The relation is unchanged by a common affine push.
AuditLine AuditApproxPushInvariance(uint64_t seed, int trials = 1000);
// nvol of an approx ball around (0, I) equals that of its push, d = 1, 2.
AuditLine AuditNvolInvariance(uint64_t seed, int64_t samples = 400000);
// nvol of mu in [0, 1], Sigma in [1, 2] is 2 - sqrt(2).
AuditLine AuditNvolClosedForm(uint64_t seed, int64_t samples = 200000);

// Every suite above.
std::vector<AuditLine> RunAllAudits(uint64_t seed);

}  // namespace dpgmm

#endif  // DPGMM_AUDIT_H_
