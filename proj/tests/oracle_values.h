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

// Generated by tests/oracles/compute_oracles.py (mpmath, 40 digits).
#ifndef DPGMM_TESTS_ORACLE_VALUES_H_
#define DPGMM_TESTS_ORACLE_VALUES_H_

namespace dpgmm::oracle {

inline constexpr double kStdNormalPdfAtZero = 0.39894228040143267794;
inline constexpr double kMixturePdfAtTwo = 0.10088704353565658204;
inline constexpr double kTruncLapBound_1_01_005 = 7.1867319248707213637;
inline constexpr double kClosedFormBound_eps1_delta01 = 230.2585092994045684;
inline constexpr double kAdvComp_k1 = 5.2565227697574319788e-6;
inline constexpr double kAdvComp_k4 = 1.0933727211816454457;
inline constexpr double kTvUnitShift = 0.38292492254802620728;
inline constexpr double kTvFarMixture = 0.99999919103904072442;
inline constexpr double kTvRadialIdentityVsDouble = 0.25;
inline constexpr double kPhiOne = 0.84134474606854294859;
inline constexpr double kDetRatioScalar = 1.0909090909090909091;
inline constexpr double kNvolClosedForm = 0.5857864376269049512;
inline constexpr double kJmjPhi = 0.0404;
inline constexpr double kJmjLhsFactor = 1.08243216;
inline constexpr double kJmjRhsFactor = 1.1212;
inline constexpr double kTvUpperUnitShift = 0.7071067811865475244;

}  // namespace dpgmm::oracle

#endif  // DPGMM_TESTS_ORACLE_VALUES_H_
