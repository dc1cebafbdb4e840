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

#ifndef DPGMM_TVDIST_INL_H_
#define DPGMM_TVDIST_INL_H_

#include <algorithm>
#include <cmath>
#include <vector>

namespace dpgmm {
namespace internal {

template <typename F>
double SimpsonRecurse(const F& f, double a, double b, double fa, double fm,
                      double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
    return left + right + diff / 15.0;
  }
  return SimpsonRecurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         SimpsonRecurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace internal

template <typename F>
double AdaptiveSimpson(const F& f, double lo, double hi, double tol,
                       std::vector<double> seeds) {
  if (!(hi > lo)) return 0.0;
  std::vector<double> pts = {lo, hi};
  for (double s : seeds) {
    if (s > lo && s < hi) pts.push_back(s);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const double total_len = hi - lo;
  double sum = 0.0;
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    sum += internal::SimpsonRecurse(f, a, b, fa, fm, fb, whole,
                                    tol * (b - a) / total_len, 50);
  }
  return sum;
}

}  // namespace dpgmm

#endif  // DPGMM_TVDIST_INL_H_
