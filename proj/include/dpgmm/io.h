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

#ifndef DPGMM_IO_H_
#define DPGMM_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "dpgmm/model.h"
#include "json.hpp"

namespace dpgmm {

// {"d": int, "components": [{"weight": w, "mean": [...], "cov": [[...]]}]}
nlohmann::json MixtureToJson(const Mixture& mixture);
absl::StatusOr<Mixture> MixtureFromJson(const nlohmann::json& j);

nlohmann::json GaussianToJson(const GaussianParams& g);
absl::StatusOr<GaussianParams> GaussianFromJson(const nlohmann::json& j);

// One sample per row, d comma-separated columns, no header. Values are
// written with 17 significant digits so they round-trip exactly.
std::string DatasetToCsv(const Dataset& data);
absl::StatusOr<Dataset> DatasetFromCsv(const std::string& text);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, const std::string& contents);

}  // namespace dpgmm

#endif  // DPGMM_IO_H_
