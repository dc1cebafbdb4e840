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

// Command-line front end. Exit codes: 0 success, 1 other failure, 2 bottom,
// 3 invalid configuration.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dpgmm/audit.h"
#include "dpgmm/io.h"
#include "dpgmm/mech.h"
#include "dpgmm/model.h"
#include "dpgmm/pipeline.h"
#include "json.hpp"

namespace dpgmm {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBottom = 2;
constexpr int kExitInvalid = 3;

struct CommonFlags {
  RunConfig config;
  std::optional<double> zeta;
  std::optional<double> g;
  std::string fine_mode = "refine";
  std::string in_path;
  std::string truth_path;
  std::string out_path;
};

void AddCommonFlags(CLI::App* app, CommonFlags* f) {
  RunConfig& c = f->config;
  app->add_option("--k", c.k, "number of mixture components");
  app->add_option("--n", c.n, "crude-stage samples (0 derives from K)");
  app->add_option("--n-prime", c.n_prime, "fresh samples (0 means n)");
  app->add_option("--eps", c.epsilon, "privacy epsilon");
  app->add_option("--delta", c.delta, "privacy delta");
  app->add_option("--alpha", c.alpha, "target accuracy");
  app->add_option("--zeta", f->zeta, "net/weight step (default alpha/k)");
  app->add_option("--cap", c.cap, "hypothesis class cap");
  app->add_option("--G", f->g, "ball radius (default n^3)");
  app->add_option("--K", c.big_k, "sample-size multiplier");
  app->add_option("--seed", c.seed, "master seed");
  app->add_option("--fine-mode", f->fine_mode, "direct or refine")
      ->check(CLI::IsMember({"direct", "refine"}));
  app->add_option("--max-candidates", c.max_candidates,
                  "keep the largest noisy counts (0 keeps all)");
  app->add_option("--round-cap", c.round_cap,
                  "local cover points per component per round");
  app->add_option("--mc-samples", c.mc_samples,
                  "Monte Carlo samples for Scheffe masses");
  app->add_option("--in", f->in_path, "data CSV, one row per sample");
  app->add_option("--truth", f->truth_path, "true mixture JSON");
  app->add_option("--out", f->out_path, "output path (default stdout)");
}

int ExitFor(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return absl::IsInvalidArgument(status) ? kExitInvalid : kExitFailure;
}

absl::Status Emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return absl::OkStatus();
  }
  return WriteFile(path, text);
}

absl::StatusOr<std::optional<Mixture>> LoadTruth(const std::string& path) {
  if (path.empty()) return std::optional<Mixture>();
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  const nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
  if (j.is_discarded()) return absl::InvalidArgumentError("bad truth JSON");
  absl::StatusOr<Mixture> m = MixtureFromJson(j);
  if (!m.ok()) return m.status();
  return std::optional<Mixture>(*std::move(m));
}

// Data comes from --in, or else is sampled from --truth.
absl::StatusOr<Dataset> LoadData(const CommonFlags& f,
                                 const std::optional<Mixture>& truth,
                                 int64_t rows) {
  if (!f.in_path.empty()) {
    absl::StatusOr<std::string> text = ReadFile(f.in_path);
    if (!text.ok()) return text.status();
    return DatasetFromCsv(*text);
  }
  if (!truth.has_value()) {
    return absl::InvalidArgumentError("need --in or --truth");
  }
  return Sample(*truth, rows, DeriveSeed(f.config.seed, 99));
}

absl::Status Finalize(CommonFlags* f) {
  f->config.zeta = f->zeta;
  f->config.g = f->g;
  absl::StatusOr<FineMode> mode = ParseFineMode(f->fine_mode);
  if (!mode.ok()) return mode.status();
  f->config.mode = *mode;
  return absl::OkStatus();
}

int ReportAndExit(const absl::StatusOr<LearnReport>& report,
                  const RunConfig& config, const std::string& out_path) {
  if (!report.ok()) return ExitFor(report.status());
  const absl::Status written =
      Emit(out_path, LearnReportToJson(*report, config).dump(2) + "\n");
  if (!written.ok()) return ExitFor(written);
  return report->bottom ? kExitBottom : kExitOk;
}

int RunLearn1d(CommonFlags f, int amplify) {
  if (absl::Status s = Finalize(&f); !s.ok()) return ExitFor(s);
  RunConfig cfg = f.config;
  cfg.d = 1;
  if (absl::Status s = cfg.Resolve(); !s.ok()) return ExitFor(s);
  absl::StatusOr<std::optional<Mixture>> truth = LoadTruth(f.truth_path);
  if (!truth.ok()) return ExitFor(truth.status());
  absl::StatusOr<Dataset> data =
      LoadData(f, *truth, (cfg.n + cfg.n_prime) * std::max(amplify, 1));
  if (!data.ok()) return ExitFor(data.status());
  if (amplify > 1) {
    return ReportAndExit(AmplifyUnivariate(cfg, *data, amplify, *truth), cfg,
                         f.out_path);
  }
  absl::StatusOr<LearnReport> report = LearnUnivariate(cfg, *data, *truth);
  if (absl::IsFailedPrecondition(report.status())) {
    // Too few samples for the configured split: the learner has nothing to
    // return but the failure marker.
    std::cerr << "bottom: " << report.status() << "\n";
    const absl::Status s = Emit(f.out_path, "{\"result\": \"bottom\"}\n");
    return s.ok() ? kExitBottom : ExitFor(s);
  }
  return ReportAndExit(report, cfg, f.out_path);
}

int RunFine(CommonFlags f, int d, const std::string& crude_path,
            bool moments, int64_t rows) {
  if (absl::Status s = Finalize(&f); !s.ok()) return ExitFor(s);
  RunConfig cfg = f.config;
  cfg.d = d;
  absl::StatusOr<std::optional<Mixture>> truth = LoadTruth(f.truth_path);
  if (!truth.ok()) return ExitFor(truth.status());
  absl::StatusOr<Dataset> data = LoadData(f, *truth, rows);
  if (!data.ok()) return ExitFor(data.status());
  std::vector<GaussianParams> crude;
  if (moments) {
    // NON-PRIVATE: the centre is the empirical mean and covariance.
    absl::StatusOr<GaussianParams> g = NonPrivateMoments(*data);
    if (!g.ok()) return ExitFor(g.status());
    std::cerr << "warning: crude centre from non-private moments\n";
    crude.push_back(*std::move(g));
  } else if (!crude_path.empty()) {
    absl::StatusOr<std::string> text = ReadFile(crude_path);
    if (!text.ok()) return ExitFor(text.status());
    const nlohmann::json j = nlohmann::json::parse(*text, nullptr, false);
    if (j.is_discarded() || !j.is_array()) {
      return ExitFor(absl::InvalidArgumentError("crude must be a JSON list"));
    }
    for (const nlohmann::json& item : j) {
      absl::StatusOr<GaussianParams> g = GaussianFromJson(item);
      if (!g.ok()) return ExitFor(g.status());
      crude.push_back(*std::move(g));
    }
  } else {
    return ExitFor(absl::InvalidArgumentError("need --crude or --moments"));
  }
  if (cfg.n == 0) cfg.n = std::max<int64_t>(2, data->n());
  if (cfg.n_prime == 0) cfg.n_prime = data->n();
  return ReportAndExit(FineStage(cfg, crude, *data, *truth), cfg, f.out_path);
}

int RunSweep(CommonFlags f, const std::vector<int64_t>& grid_n,
             const std::vector<double>& grid_eps,
             const std::vector<double>& grid_alpha, int trials) {
  if (absl::Status s = Finalize(&f); !s.ok()) return ExitFor(s);
  absl::StatusOr<std::optional<Mixture>> truth = LoadTruth(f.truth_path);
  if (!truth.ok()) return ExitFor(truth.status());
  SweepConfig sweep;
  sweep.base = f.config;
  sweep.base.d = 1;
  sweep.n_values = grid_n;
  sweep.eps_values = grid_eps.empty() ? std::vector{f.config.epsilon}
                                      : grid_eps;
  sweep.alpha_values = grid_alpha.empty() ? std::vector{f.config.alpha}
                                          : grid_alpha;
  sweep.trials = trials;
  if (truth->has_value()) {
    sweep.truth = **truth;
  } else {
    sweep.truth =
        Mixture::Create({{0.5, GaussianParams::Univariate(0.0, 1.0).value()},
                         {0.5, GaussianParams::Univariate(100.0, 25.0).value()}})
            .value();
  }
  absl::StatusOr<std::vector<SweepRow>> rows = Sweep(sweep);
  if (!rows.ok()) return ExitFor(rows.status());
  const absl::Status s = Emit(f.out_path, SweepRowsToCsv(*rows));
  return s.ok() ? kExitOk : ExitFor(s);
}

int RunCheckLemmas(uint64_t seed) {
  bool all = true;
  for (const AuditLine& line : RunAllAudits(seed)) {
    std::cout << (line.passed ? "PASS " : "FAIL ") << line.name << ": "
              << line.detail << "\n";
    all = all && line.passed;
  }
  return all ? kExitOk : kExitFailure;
}

int Main(int argc, char** argv) {
  CLI::App app{"Differentially private Gaussian mixture learning"};
  app.require_subcommand(1);

  CommonFlags learn_flags;
  int amplify = 1;
  CLI::App* learn = app.add_subcommand("learn1d", "univariate learner");
  AddCommonFlags(learn, &learn_flags);
  learn->add_option("--amplify", amplify,
                    "repeat on disjoint groups and keep the majority run")
      ->check(CLI::PositiveNumber);

  CommonFlags fine_flags;
  int fine_d = 1;
  std::string crude_path;
  bool moments = false;
  int64_t fine_rows = 20000;
  CLI::App* fine = app.add_subcommand("fine", "fine stage from crude centres");
  AddCommonFlags(fine, &fine_flags);
  fine->add_option("--d", fine_d, "dimension (<= 3)");
  fine->add_option("--crude", crude_path, "JSON list of {mean, cov}");
  fine->add_flag("--moments", moments,
                 "NON-PRIVATE: use empirical moments as the single centre");
  fine->add_option("--rows", fine_rows, "rows sampled from --truth");

  CommonFlags sweep_flags;
  std::vector<int64_t> grid_n;
  std::vector<double> grid_eps;
  std::vector<double> grid_alpha;
  int trials = 1;
  CLI::App* sweep = app.add_subcommand("sweep", "grid experiment to CSV");
  AddCommonFlags(sweep, &sweep_flags);
  sweep->add_option("--grid-n", grid_n, "values of n")->required()->delimiter(',');
  sweep->add_option("--grid-eps", grid_eps, "values of eps")->delimiter(',');
  sweep->add_option("--grid-alpha", grid_alpha, "values of alpha")->delimiter(',');
  sweep->add_option("--trials", trials, "trials per cell");

  uint64_t audit_seed = 2024;
  CLI::App* check = app.add_subcommand("check-lemmas", "property suites");
  check->add_option("--seed", audit_seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  if (learn->parsed()) return RunLearn1d(learn_flags, amplify);
  if (fine->parsed()) {
    return RunFine(fine_flags, fine_d, crude_path, moments, fine_rows);
  }
  if (sweep->parsed()) {
    return RunSweep(sweep_flags, grid_n, grid_eps, grid_alpha, trials);
  }
  return RunCheckLemmas(audit_seed);
}

}  // namespace
}  // namespace dpgmm

int main(int argc, char** argv) { return dpgmm::Main(argc, argv); }
