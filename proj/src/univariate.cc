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

#include "dpgmm/univariate.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpgmm/status_macros.h"

namespace dpgmm {
namespace {

absl::Status RequireUnivariate(const Dataset& data) {
  if (data.d() != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected univariate data, got d = ", data.d()));
  }
  return absl::OkStatus();
}

std::vector<double> SortedValues(const Dataset& data) {
  std::vector<double> y = data.values();
  std::sort(y.begin(), y.end());
  return y;
}

}  // namespace

absl::StatusOr<std::vector<GapPair>> ConsecutivePairs(const Dataset& data) {
  DPGMM_RETURN_IF_ERROR(RequireUnivariate(data));
  if (data.n() < 2) {
    return absl::InvalidArgumentError("need at least two points");
  }
  const std::vector<double> y = SortedValues(data);
  std::vector<GapPair> pairs;
  pairs.reserve(y.size() - 1);
  for (size_t j = 0; j + 1 < y.size(); ++j) {
    pairs.push_back({y[j], y[j + 1] - y[j]});
  }
  return pairs;
}

absl::StatusOr<int64_t> MultisetDistance(std::vector<GapPair> z,
                                         std::vector<GapPair> z_prime) {
  if (z.size() != z_prime.size()) {
    return absl::InvalidArgumentError("multisets differ in size");
  }
  std::sort(z.begin(), z.end());
  std::sort(z_prime.begin(), z_prime.end());
  int64_t common = 0;
  auto it = z.begin();
  auto jt = z_prime.begin();
  while (it != z.end() && jt != z_prime.end()) {
    if (*it < *jt) {
      ++it;
    } else if (*jt < *it) {
      ++jt;
    } else {
      ++common;
      ++it;
      ++jt;
    }
  }
  return static_cast<int64_t>(z.size()) - common;
}

absl::StatusOr<long double> FifthPower(int64_t n) {
  if (n < 1 || n > kMaxBucketSampleSize) {
    return absl::OutOfRangeError(absl::StrCat(
        "n = ", n, " outside [1, ", kMaxBucketSampleSize, "] for n^5"));
  }
  unsigned __int128 p = 1;
  for (int i = 0; i < 5; ++i) p *= static_cast<unsigned __int128>(n);
  return static_cast<long double>(p);
}

absl::StatusOr<BucketKey> GetBucketKey(double left, double gap, int64_t n) {
  if (!(gap > 0.0) || !std::isfinite(gap)) {
    return absl::InvalidArgumentError("gap must be positive and finite");
  }
  if (n < 2) return absl::InvalidArgumentError("n must be >= 2");
  DPGMM_ASSIGN_OR_RETURN(const long double n5, FifthPower(n));
  const int64_t a = std::ilogb(gap);
  const long double cell = std::ldexp(n5, static_cast<int>(a));
  const auto b = static_cast<int64_t>(
      std::floor(static_cast<long double>(left) / cell));
  return BucketKey{a, b};
}

absl::StatusOr<BucketCounts> CountBuckets(const Dataset& data) {
  DPGMM_ASSIGN_OR_RETURN(const std::vector<GapPair> pairs,
                         ConsecutivePairs(data));
  BucketCounts counts;
  for (const GapPair& p : pairs) {
    if (!(p.gap > 0.0)) continue;
    DPGMM_ASSIGN_OR_RETURN(const BucketKey key,
                           GetBucketKey(p.left, p.gap, data.n()));
    ++counts[key];
  }
  return counts;
}

double CandidateThreshold(const PrivacyBudget& budget) {
  return 100.0 / budget.epsilon * std::log(1.0 / budget.delta);
}

absl::StatusOr<CandidateSet> NoisyCandidates(const Dataset& data,
                                             const PrivacyBudget& budget,
                                             Rng& rng) {
  if (!(budget.epsilon > 0.0 && budget.epsilon <= 1.0) ||
      !(budget.delta > 0.0 && budget.delta < 1.0)) {
    return absl::InvalidArgumentError(
        "crude stage needs epsilon in (0, 1] and delta in (0, 1)");
  }
  DPGMM_ASSIGN_OR_RETURN(const BucketCounts counts, CountBuckets(data));
  DPGMM_ASSIGN_OR_RETURN(const long double n5, FifthPower(data.n()));
  DPGMM_ASSIGN_OR_RETURN(
      const TruncLapSpec noise,
      TruncLapSpec::Create(1.0, budget.epsilon / 10.0, budget.delta / 10.0));
  const double threshold = CandidateThreshold(budget);
  if (!(noise.bound() < threshold)) {
    // An empty bucket could then cross the threshold, which lazy noising
    // never reproduces.
    return absl::InvalidArgumentError(absl::StrCat(
        "noise bound ", noise.bound(), " is not below the threshold ",
        threshold, "; lower delta"));
  }
  CandidateSet out;
  for (const auto& [key, count] : counts) {
    const double noisy =
        static_cast<double>(count) + SampleTruncLap(noise, rng);
    if (noisy > threshold) {
      const int a = static_cast<int>(key.a);
      const auto mu = static_cast<double>(static_cast<long double>(key.b) *
                                          std::ldexp(n5, a));
      out.push_back({mu, std::ldexp(1.0, 2 * a), key, noisy});
    }
  }
  return out;
}

absl::StatusOr<int64_t> CountL1Sensitivity(const Dataset& x,
                                           const Dataset& x_prime) {
  DPGMM_RETURN_IF_ERROR(RequireUnivariate(x));
  DPGMM_RETURN_IF_ERROR(RequireUnivariate(x_prime));
  if (x.n() != x_prime.n()) {
    return absl::InvalidArgumentError("datasets differ in size");
  }
  {
    const std::vector<double> a = SortedValues(x);
    const std::vector<double> b = SortedValues(x_prime);
    std::vector<double> only_a;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(only_a));
    if (only_a.size() > 1) {
      return absl::InvalidArgumentError("datasets are not adjacent");
    }
  }
  DPGMM_ASSIGN_OR_RETURN(const BucketCounts cx, CountBuckets(x));
  DPGMM_ASSIGN_OR_RETURN(const BucketCounts cy, CountBuckets(x_prime));
  int64_t l1 = 0;
  auto it = cx.begin();
  auto jt = cy.begin();
  while (it != cx.end() || jt != cy.end()) {
    if (jt == cy.end() || (it != cx.end() && it->first < jt->first)) {
      l1 += it->second;
      ++it;
    } else if (it == cx.end() || jt->first < it->first) {
      l1 += jt->second;
      ++jt;
    } else {
      l1 += std::abs(it->second - jt->second);
      ++it;
      ++jt;
    }
  }
  return l1;
}

nlohmann::json CandidatesToJson(const CandidateSet& candidates) {
  nlohmann::json out = nlohmann::json::array();
  for (const Candidate& c : candidates) {
    out.push_back(
        {{"mu", c.mu}, {"var", c.var}, {"a", c.key.a}, {"b", c.key.b}});
  }
  return out;
}

}  // namespace dpgmm
