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

#include "dpgmm/io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "dpgmm/status_macros.h"

namespace dpgmm {

using nlohmann::json;

json GaussianToJson(const GaussianParams& g) {
  const int d = g.dim();
  json mean = json::array();
  json cov = json::array();
  for (int i = 0; i < d; ++i) {
    mean.push_back(g.mean()(i));
    json row = json::array();
    for (int j = 0; j < d; ++j) row.push_back(g.cov()(i, j));
    cov.push_back(std::move(row));
  }
  return json{{"mean", std::move(mean)}, {"cov", std::move(cov)}};
}

absl::StatusOr<GaussianParams> GaussianFromJson(const json& j) {
  try {
    const auto mean = j.at("mean").get<std::vector<double>>();
    const auto cov = j.at("cov").get<std::vector<std::vector<double>>>();
    const auto d = static_cast<Eigen::Index>(mean.size());
    if (static_cast<Eigen::Index>(cov.size()) != d) {
      return absl::InvalidArgumentError("cov row count does not match mean");
    }
    Eigen::VectorXd m(d);
    Eigen::MatrixXd c(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      m(i) = mean[i];
      if (static_cast<Eigen::Index>(cov[i].size()) != d) {
        return absl::InvalidArgumentError("cov is not square");
      }
      for (Eigen::Index k = 0; k < d; ++k) c(i, k) = cov[i][k];
    }
    return GaussianParams::Create(std::move(m), std::move(c));
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed Gaussian JSON: ", e.what()));
  }
}

json MixtureToJson(const Mixture& mixture) {
  json comps = json::array();
  for (const auto& c : mixture.components()) {
    json entry = GaussianToJson(c.params);
    entry["weight"] = c.weight;
    comps.push_back(std::move(entry));
  }
  return json{{"d", mixture.dim()}, {"components", std::move(comps)}};
}

absl::StatusOr<Mixture> MixtureFromJson(const json& j) {
  if (!j.is_object() || !j.contains("components") ||
      !j["components"].is_array()) {
    return absl::InvalidArgumentError("mixture JSON needs a components array");
  }
  std::vector<WeightedComponent> comps;
  for (const auto& entry : j["components"]) {
    if (!entry.is_object() || !entry.contains("weight") ||
        !entry["weight"].is_number()) {
      return absl::InvalidArgumentError("component needs a numeric weight");
    }
    DPGMM_ASSIGN_OR_RETURN(GaussianParams g, GaussianFromJson(entry));
    comps.push_back({entry["weight"].get<double>(), std::move(g)});
  }
  if (j.contains("d")) {
    if (!j["d"].is_number_integer()) {
      return absl::InvalidArgumentError("d must be an integer");
    }
    for (const auto& c : comps) {
      if (c.params.dim() != j["d"].get<int>()) {
        return absl::InvalidArgumentError("component dimension differs from d");
      }
    }
  }
  return Mixture::Create(std::move(comps));
}

std::string DatasetToCsv(const Dataset& data) {
  std::string out;
  for (int64_t i = 0; i < data.n(); ++i) {
    const auto row = data.row(i);
    for (int j = 0; j < data.d(); ++j) {
      if (j > 0) out += ',';
      absl::StrAppendFormat(&out, "%.17g", row[j]);
    }
    out += '\n';
  }
  return out;
}

absl::StatusOr<Dataset> DatasetFromCsv(const std::string& text) {
  std::vector<double> values;
  int d = -1;
  int64_t n = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    int cols = 0;
    for (absl::string_view field : absl::StrSplit(line, ',')) {
      field = absl::StripAsciiWhitespace(field);
      double v = 0.0;
      const auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", n + 1, ": cannot parse '", field, "'"));
      }
      values.push_back(v);
      ++cols;
    }
    if (d == -1) d = cols;
    if (cols != d) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", n + 1, " has ", cols, " columns, expected ", d));
    }
    ++n;
  }
  if (n == 0) return absl::InvalidArgumentError("CSV has no rows");
  return Dataset::Create(n, d, std::move(values));
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return absl::InternalError(absl::StrCat("cannot write ", path));
  out << contents;
  return out ? absl::OkStatus()
             : absl::InternalError(absl::StrCat("write failed: ", path));
}

}  // namespace dpgmm
