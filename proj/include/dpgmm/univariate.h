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

#ifndef DPGMM_UNIVARIATE_H_
#define DPGMM_UNIVARIATE_H_

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "absl/status/statusor.h"
#include "dpgmm/mech.h"
#include "dpgmm/model.h"
#include "json.hpp"

namespace dpgmm {

// Consecutive sorted points: left endpoint and the gap to the next point.
struct GapPair {
  double left;
  double gap;

  friend auto operator<=>(const GapPair&, const GapPair&) = default;
};

// Dyadic gap scale a (2^a <= gap < 2^(a+1)) and location cell b
// (b n^5 2^a <= left < (b+1) n^5 2^a).
struct BucketKey {
  int64_t a;
  int64_t b;

  friend auto operator<=>(const BucketKey&, const BucketKey&) = default;
};

struct Candidate {
  double mu;
  double var;  // exactly 2^(2a)
  BucketKey key;
  double noisy_count;
};

using CandidateSet = std::vector<Candidate>;
using BucketCounts = std::map<BucketKey, int64_t>;

// Largest sample size for which n^5 is formed; beyond it the location cells
// are rejected.
inline constexpr int64_t kMaxBucketSampleSize = 1000000;

// Sorted (Y_j, Y_{j+1} - Y_j) for j = 1..n-1. Requires d = 1 and n >= 2.
absl::StatusOr<std::vector<GapPair>> ConsecutivePairs(const Dataset& data);

// Minimum number of unmatched elements over all pairings of two equal-size
// multisets, i.e. |Z| minus the size of the multiset intersection.
absl::StatusOr<int64_t> MultisetDistance(std::vector<GapPair> z,
                                         std::vector<GapPair> z_prime);

// n^5 as a floating value (computed exactly in 128-bit integers first).
absl::StatusOr<long double> FifthPower(int64_t n);

// Bucket of one pair. `a` comes from the binary exponent of `gap`, so exact
// powers of two land in their own bucket.
absl::StatusOr<BucketKey> GetBucketKey(double left, double gap, int64_t n);

// Counts c_(a,b) over the nonzero-gap pairs of `data`.
absl::StatusOr<BucketCounts> CountBuckets(const Dataset& data);

// Threshold (100 / epsilon) ln(1 / delta) a noisy count must exceed.
double CandidateThreshold(const PrivacyBudget& budget);

// Noisy bucket histogram: every nonempty bucket receives an independent
// TLap(1, epsilon/10, delta/10) draw (in (a, b) order) and each bucket whose
// noisy count exceeds CandidateThreshold yields (b n^5 2^a, 2^(2a)).
// Empty buckets are never noised; the noise bound keeps them below the
// threshold. Output is sorted by (a, b).
absl::StatusOr<CandidateSet> NoisyCandidates(const Dataset& data,
                                             const PrivacyBudget& budget,
                                             Rng& rng);

// Sum over buckets of |c_e(X) - c_e(X')| for datasets differing in at most
// one point.
absl::StatusOr<int64_t> CountL1Sensitivity(const Dataset& x,
                                           const Dataset& x_prime);

nlohmann::json CandidatesToJson(const CandidateSet& candidates);

}  // namespace dpgmm

#endif  // DPGMM_UNIVARIATE_H_
