# Copyright 2026 The dpgmm Authors
# SPDX-License-Identifier: Apache-2.0

"""Independent high-precision reference values for the C++ tests.

Run with `python3 compute_oracles.py > ../oracle_values.h` after changing
any entry; the generated header is checked in.
"""

import mpmath as mp

LICENSE = """// Copyright 2026 The dpgmm Authors
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
// limitations under the License."""

mp.mp.dps = 40


def radial_tv_identity_vs_double():
    """TV(N(0, I_2), N(0, 2 I_2)) by 1-D radial integration."""
    f1 = lambda r: mp.exp(-r * r / 2) / (2 * mp.pi)
    f2 = lambda r: mp.exp(-r * r / 4) / (4 * mp.pi)
    g = lambda r: abs(f1(r) - f2(r)) * 2 * mp.pi * r
    cross = 2 * mp.sqrt(mp.log(2))
    return mp.quad(g, [0, cross, mp.inf]) / 2


def main():
    values = {
        "kStdNormalPdfAtZero": mp.npdf(0),
        "kMixturePdfAtTwo": 0.3 * mp.npdf(2) + 0.7 * mp.npdf(2, 4, 2),
        "kTruncLapBound_1_01_005": 10 * mp.log(1 + mp.expm1(mp.mpf("0.1")) / mp.mpf("0.1")),
        "kClosedFormBound_eps1_delta01": 100 * mp.log(10),
        "kAdvComp_k1": mp.sqrt(2 * mp.log(mp.mpf(10) ** 6)) * mp.mpf("1e-6")
        + mp.mpf("1e-6") * mp.expm1(mp.mpf("1e-6")),
        "kAdvComp_k4": mp.sqrt(8 * mp.log(mp.mpf(10) ** 6)) * mp.mpf("0.1")
        + mp.mpf("0.4") * mp.expm1(mp.mpf("0.1")),
        "kTvUnitShift": 2 * mp.ncdf(mp.mpf("0.5")) - 1,
        "kTvFarMixture": None,
        "kTvRadialIdentityVsDouble": radial_tv_identity_vs_double(),
        "kPhiOne": mp.ncdf(1),
        "kDetRatioScalar": mp.mpf("1.2") / mp.mpf("1.1"),
        "kNvolClosedForm": 2 - mp.sqrt(2),
        "kJmjPhi": mp.mpf("1.02") ** 2 - 1,
        "kJmjLhsFactor": mp.mpf("1.02") ** 4,
        "kJmjRhsFactor": 1 + 3 * (mp.mpf("1.02") ** 2 - 1),
        "kTvUpperUnitShift": 1 / mp.sqrt(2),
    }
    # N(0,1) vs 1/2 N(-10,1) + 1/2 N(10,1).
    p = lambda x: mp.npdf(x)
    q = lambda x: (mp.npdf(x, -10, 1) + mp.npdf(x, 10, 1)) / 2
    values["kTvFarMixture"] = mp.quad(lambda x: abs(p(x) - q(x)),
                                      [-mp.inf, -10, -5, 0, 5, 10, mp.inf]) / 2
    print(LICENSE)
    print()
    print("// Generated by tests/oracles/compute_oracles.py (mpmath, 40 digits).")
    print("#ifndef DPGMM_TESTS_ORACLE_VALUES_H_")
    print("#define DPGMM_TESTS_ORACLE_VALUES_H_")
    print()
    print("namespace dpgmm::oracle {")
    print()
    for name, v in values.items():
        print(f"inline constexpr double {name} = {mp.nstr(v, 20)};")
    print()
    print("}  // namespace dpgmm::oracle")
    print()
    print("#endif  // DPGMM_TESTS_ORACLE_VALUES_H_")


if __name__ == "__main__":
    main()
