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

#include "dpgmm/pipeline.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "dpgmm/io.h"
#include "dpgmm/mech.h"
#include "dpgmm/select.h"
#include "dpgmm/status_macros.h"
#include "dpgmm/tvdist.h"

namespace dpgmm {
namespace {

// (G, zeta) of each refinement round.
constexpr std::pair<double, double> kRefineSchedule[] = {
    {4.0, 0.8}, {4.0, 0.8}, {2.0, 0.5},  {2.0, 0.5},
    {1.5, 0.3}, {1.5, 0.3}, {1.25, 0.2}, {1.25, 0.2}};
constexpr int kRefineRounds = std::size(kRefineSchedule);
constexpr int kMaxLocalizationScales = 6;
constexpr int kMaxLocalizationCenters = 12;
constexpr int kTransferSteps[] = {1, 2, 4, 8, 16, 32};
// Fresh-sample shares: localization, initial selection; rounds split the
// rest evenly.
constexpr double kLocalizationShare = 0.2;
constexpr double kInitialShare = 0.1;
constexpr double kFineOnlyInitialShare = 0.15;

std::vector<double> MixtureKey(const Mixture& m) {
  std::vector<double> key;
  for (const WeightedComponent& c : m.components()) {
    key.push_back(c.weight);
    key.insert(key.end(), c.params.mean().data(),
               c.params.mean().data() + c.params.mean().size());
    key.insert(key.end(), c.params.cov().data(),
               c.params.cov().data() + c.params.cov().size());
  }
  return key;
}

// Keeps a stage's slice of the input together with its absolute offsets.
struct Block {
  Dataset data;
  int64_t offset;
};

class Stages {
 public:
  explicit Stages(LearnReport* report) : report_(report) {}

  absl::StatusOr<Dataset> Read(const std::string& name, const Block& block,
                               int64_t begin, int64_t end) {
    DPGMM_ASSIGN_OR_RETURN(Dataset slice, block.data.Slice(begin, end));
    report_->reads.push_back(
        {name, block.offset + begin, block.offset + end});
    return slice;
  }

 private:
  LearnReport* report_;
};

struct FineContext {
  RunConfig config;
  const std::optional<Mixture>* truth;
  LearnReport* report;
  Rng* rng;
};

absl::StatusOr<size_t> SelectIndex(const FineContext& ctx,
                                   const std::vector<Mixture>& hypotheses,
                                   const Dataset& data, uint64_t stream,
                                   nlohmann::json* log) {
  MdeOptions mde;
  mde.mc_samples = ctx.config.mc_samples;
  mde.seed = DeriveSeed(ctx.config.seed, 7, stream);
  DPGMM_ASSIGN_OR_RETURN(
      const SelectionReport sel,
      PrivateSelect(hypotheses, data, ctx.config.epsilon, *ctx.rng, mde));
  (*log)["class_size"] = hypotheses.size();
  (*log)["chosen_score"] = sel.scores[sel.chosen];
  (*log)["min_score"] =
      *std::min_element(sel.scores.begin(), sel.scores.end());
  (*log)["n"] = data.n();
  return sel.chosen;
}

absl::Status RecordBestInClass(const FineContext& ctx,
                               const std::vector<Mixture>& hypotheses) {
  if (!ctx.truth->has_value()) return absl::OkStatus();
  double best = 1.0;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    DPGMM_ASSIGN_OR_RETURN(
        const double tv,
        ReportTv(**ctx.truth, hypotheses[i],
                 DeriveSeed(ctx.config.seed, 11, i), 4000));
    best = std::min(best, tv);
  }
  ctx.report->best_in_class_tv = best;
  return absl::OkStatus();
}

// Local cover points around one component, at most `cap` of them.
absl::StatusOr<std::vector<GaussianParams>> LocalPoints(
    const GaussianParams& center, double g, double zeta, int64_t cap,
    Rng& rng) {
  DPGMM_ASSIGN_OR_RETURN(const CrudeBall ball, CrudeBall::Create(center, g));
  DPGMM_ASSIGN_OR_RETURN(const GaussianNet net, GaussianNet::Build(ball, zeta));
  if (net.size_is_exact() && net.size() <= static_cast<long double>(cap)) {
    return net.Materialize(cap);
  }
  // Uniform draws from a large ball rarely land near the center, so the cap
  // is split across nested balls of radius g, g^(1/2), g^(1/4). Balls no
  // wider than the lattice step can hold no lattice point and are skipped.
  std::vector<GaussianNet> nets = {net};
  for (double r = std::sqrt(g); nets.size() < 3 && r > 1.0 + zeta;
       r = std::sqrt(r)) {
    DPGMM_ASSIGN_OR_RETURN(const CrudeBall inner, CrudeBall::Create(center, r));
    DPGMM_ASSIGN_OR_RETURN(GaussianNet inner_net,
                           GaussianNet::Build(inner, zeta));
    nets.push_back(std::move(inner_net));
  }
  std::vector<GaussianParams> out;
  for (int64_t i = 0; i < cap; ++i) {
    out.push_back(nets[i % nets.size()].SampleUniform(rng));
  }
  return out;
}

// The current mixture, every single-component move to a local cover point,
// and weight transfers between pairs of components.
absl::StatusOr<std::vector<Mixture>> RoundClass(const Mixture& current,
                                                double g, double zeta,
                                                int64_t per_component,
                                                double weight_step,
                                                Rng& rng) {
  std::map<std::vector<double>, Mixture> uniq;
  auto add = [&](std::vector<WeightedComponent> comps) -> absl::Status {
    DPGMM_ASSIGN_OR_RETURN(Mixture m, CanonicalMixture(std::move(comps)));
    uniq.emplace(MixtureKey(m), std::move(m));
    return absl::OkStatus();
  };
  const std::vector<WeightedComponent>& base = current.components();
  DPGMM_RETURN_IF_ERROR(add(base));
  for (size_t p = 0; p < base.size(); ++p) {
    DPGMM_ASSIGN_OR_RETURN(
        const std::vector<GaussianParams> points,
        LocalPoints(base[p].params, g, zeta, per_component, rng));
    for (const GaussianParams& q : points) {
      std::vector<WeightedComponent> comps = base;
      comps[p].params = q;
      DPGMM_RETURN_IF_ERROR(add(std::move(comps)));
    }
  }
  for (size_t p = 0; p < base.size(); ++p) {
    for (size_t q = 0; q < base.size(); ++q) {
      if (p == q) continue;
      for (int t : kTransferSteps) {
        const double amount = t * weight_step;
        if (base[p].weight < amount - 1e-12) break;
        std::vector<WeightedComponent> comps = base;
        comps[p].weight = std::max(0.0, comps[p].weight - amount);
        if (comps[p].weight < 1e-12) comps[p].weight = 0.0;
        comps[q].weight += amount;
        DPGMM_RETURN_IF_ERROR(add(std::move(comps)));
      }
    }
  }
  std::vector<Mixture> out;
  out.reserve(uniq.size());
  for (auto& [key, m] : uniq) out.push_back(std::move(m));
  return out;
}

// Initial selection over mixtures of the given centers, then the rounds of
// the refinement schedule. `block` holds every row still unused.
absl::StatusOr<Mixture> Refine(const FineContext& ctx,
                               const std::vector<GaussianParams>& centers,
                               const Block& block, int64_t init_rows,
                               Stages& stages) {
  const RunConfig& cfg = ctx.config;
  nlohmann::json& log = ctx.report->details;
  const double init_zeta = 1.0 / (2.0 * cfg.k);
  HypothesisOptions hopt;
  hopt.cap = cfg.cap;
  hopt.seed = DeriveSeed(cfg.seed, 3);
  std::vector<std::vector<GaussianParams>> singles;
  for (const GaussianParams& c : centers) singles.push_back({c});
  DPGMM_ASSIGN_OR_RETURN(const HypothesisClass init,
                         MixtureHypotheses(singles, cfg.k, init_zeta, hopt));
  ctx.report->truncated = init.truncated;
  DPGMM_ASSIGN_OR_RETURN(const Dataset init_data,
                         stages.Read("initial-select", block, 0, init_rows));
  nlohmann::json init_log;
  DPGMM_ASSIGN_OR_RETURN(
      const size_t first,
      SelectIndex(ctx, init.hypotheses, init_data, 0, &init_log));
  log["initial"] = init_log;
  Mixture current = init.hypotheses[first];
  int64_t class_size = static_cast<int64_t>(init.hypotheses.size());

  const int64_t remaining = block.data.n() - init_rows;
  const int64_t per_round = remaining / kRefineRounds;
  if (per_round < 1) {
    return absl::FailedPreconditionError("too few fresh samples to refine");
  }
  const double weight_step = init_zeta / 50.0;
  const int64_t per_component =
      std::max<int64_t>(1, std::min<int64_t>(cfg.cap, cfg.round_cap));
  nlohmann::json rounds = nlohmann::json::array();
  std::vector<Mixture> last_class;
  for (int r = 0; r < kRefineRounds; ++r) {
    const auto [g, zeta] = kRefineSchedule[r];
    DPGMM_ASSIGN_OR_RETURN(
        std::vector<Mixture> cls,
        RoundClass(current, g, zeta, per_component, weight_step, *ctx.rng));
    const int64_t begin = init_rows + r * per_round;
    DPGMM_ASSIGN_OR_RETURN(
        const Dataset chunk,
        stages.Read(absl::StrCat("round-", r), block, begin,
                    begin + per_round));
    nlohmann::json round_log = {{"G", g}, {"zeta", zeta}};
    DPGMM_ASSIGN_OR_RETURN(const size_t chosen,
                           SelectIndex(ctx, cls, chunk, r + 1, &round_log));
    rounds.push_back(round_log);
    current = cls[chosen];
    class_size = std::max<int64_t>(class_size, cls.size());
    if (r + 1 == kRefineRounds) last_class = std::move(cls);
  }
  log["rounds"] = rounds;
  ctx.report->class_size = class_size;
  DPGMM_RETURN_IF_ERROR(RecordBestInClass(ctx, last_class));
  return current;
}

absl::StatusOr<Mixture> Direct(const FineContext& ctx,
                               const std::vector<GaussianParams>& centers,
                               const Block& block, Stages& stages) {
  const RunConfig& cfg = ctx.config;
  std::vector<GaussianNet> nets;
  for (const GaussianParams& c : centers) {
    DPGMM_ASSIGN_OR_RETURN(const CrudeBall ball,
                           CrudeBall::Create(c, cfg.EffectiveG()));
    DPGMM_ASSIGN_OR_RETURN(GaussianNet net,
                           GaussianNet::Build(ball, cfg.EffectiveZeta()));
    nets.push_back(std::move(net));
  }
  HypothesisOptions hopt;
  hopt.cap = cfg.cap;
  hopt.seed = DeriveSeed(cfg.seed, 3);
  DPGMM_ASSIGN_OR_RETURN(
      const HypothesisClass cls,
      MixtureHypotheses(nets, cfg.k, cfg.EffectiveZeta(), hopt));
  ctx.report->class_size = static_cast<int64_t>(cls.hypotheses.size());
  ctx.report->truncated = cls.truncated;
  ctx.report->details["raw_class_size"] = static_cast<double>(cls.raw_size);
  DPGMM_ASSIGN_OR_RETURN(const Dataset data,
                         stages.Read("select", block, 0, block.data.n()));
  nlohmann::json sel_log;
  DPGMM_ASSIGN_OR_RETURN(const size_t chosen,
                         SelectIndex(ctx, cls.hypotheses, data, 0, &sel_log));
  ctx.report->details["select"] = sel_log;
  DPGMM_RETURN_IF_ERROR(RecordBestInClass(ctx, cls.hypotheses));
  return cls.hypotheses[chosen];
}

struct LocalizedCenter {
  GaussianParams params;
  double noisy_count;
  int64_t scale;
};

// Noisy histograms of the localization rows at widths 2^a n over the
// candidate scales a; bins above the noise bound become centers.
absl::StatusOr<std::vector<GaussianParams>> Localize(
    const RunConfig& cfg, const CandidateSet& candidates, const Dataset& rows,
    Rng& rng, nlohmann::json* log) {
  std::map<int64_t, double> scale_weight;
  for (const Candidate& c : candidates) {
    double& w = scale_weight[c.key.a];
    w = std::max(w, c.noisy_count);
  }
  std::vector<std::pair<double, int64_t>> scales;
  for (const auto& [a, w] : scale_weight) scales.emplace_back(-w, a);
  std::sort(scales.begin(), scales.end());
  if (scales.size() > kMaxLocalizationScales) {
    scales.resize(kMaxLocalizationScales);
  }
  const int h = static_cast<int>(scales.size());
  DPGMM_ASSIGN_OR_RETURN(
      const TruncLapSpec noise,
      TruncLapSpec::Create(1.0, cfg.epsilon / (2.0 * h),
                           cfg.delta / (2.0 * h)));
  std::vector<std::vector<LocalizedCenter>> per_scale;
  nlohmann::json scale_log = nlohmann::json::array();
  for (const auto& [neg_w, a] : scales) {
    const double width = std::ldexp(static_cast<double>(cfg.n),
                                    static_cast<int>(a));
    std::map<int64_t, int64_t> bins;
    for (double x : rows.values()) {
      ++bins[static_cast<int64_t>(std::floor(x / width))];
    }
    std::vector<LocalizedCenter> found;
    for (const auto& [b, count] : bins) {
      const double noisy = count + SampleTruncLap(noise, rng);
      if (noisy > noise.bound()) {
        DPGMM_ASSIGN_OR_RETURN(
            GaussianParams g,
            GaussianParams::Univariate((b + 0.5) * width,
                                       0.25 * width * width));
        found.push_back({std::move(g), noisy, a});
      }
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const auto& x, const auto& y) {
                       return x.noisy_count > y.noisy_count;
                     });
    scale_log.push_back({{"a", a}, {"width", width}, {"bins", found.size()}});
    per_scale.push_back(std::move(found));
  }
  std::vector<GaussianParams> out;
  for (size_t rank = 0; out.size() < kMaxLocalizationCenters; ++rank) {
    bool any = false;
    for (const auto& found : per_scale) {
      if (rank < found.size() && out.size() < kMaxLocalizationCenters) {
        out.push_back(found[rank].params);
        any = true;
      }
    }
    if (!any) break;
  }
  (*log)["localization"] = {{"scales", scale_log},
                            {"threshold", noise.bound()},
                            {"centers", out.size()}};
  return out;
}

absl::Status FinishReport(const FineContext& ctx, Mixture chosen) {
  LearnReport& report = *ctx.report;
  if (ctx.truth->has_value()) {
    DPGMM_ASSIGN_OR_RETURN(
        report.tv,
        ReportTv(**ctx.truth, chosen, DeriveSeed(ctx.config.seed, 13)));
  }
  report.mixture = std::move(chosen);
  report.bottom = false;
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<FineMode> ParseFineMode(const std::string& name) {
  if (name == "direct") return FineMode::kDirect;
  if (name == "refine") return FineMode::kRefine;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown fine mode '", name, "'"));
}

std::string FineModeName(FineMode mode) {
  return mode == FineMode::kDirect ? "direct" : "refine";
}

absl::Status RunConfig::Resolve() {
  if (d < 1) return absl::InvalidArgumentError("d must be >= 1");
  if (k < 1 || k > kDefaultMaxComponents) {
    return absl::InvalidArgumentError(
        absl::StrCat("k must lie in [1, ", kDefaultMaxComponents, "]"));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("eps must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError("delta must lie in (0, 1)");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    return absl::InvalidArgumentError("alpha must lie in (0, 1]");
  }
  if (!(big_k > 0.0)) return absl::InvalidArgumentError("K must be positive");
  if (cap < 1 || round_cap < 1) {
    return absl::InvalidArgumentError("caps must be >= 1");
  }
  if (mc_samples < 1000) {
    return absl::InvalidArgumentError("mc samples must be >= 1000");
  }
  if (n < 0 || n_prime < 0) {
    return absl::InvalidArgumentError("sample sizes must be nonnegative");
  }
  if (n == 0) {
    n = static_cast<int64_t>(
        std::ceil(big_k * k * std::log(1.0 / delta) / (alpha * epsilon)));
  }
  if (n_prime == 0) n_prime = n;
  if (n < 2) return absl::InvalidArgumentError("n must be >= 2");
  if (zeta.has_value() && !(*zeta > 0.0 && *zeta < 1.0)) {
    return absl::InvalidArgumentError("zeta must lie in (0, 1)");
  }
  if (g.has_value() && !(*g >= 1.0)) {
    return absl::InvalidArgumentError("G must be >= 1");
  }
  if (max_candidates < 0) {
    return absl::InvalidArgumentError("max candidates must be >= 0");
  }
  return absl::OkStatus();
}

double RunConfig::EffectiveG() const {
  if (g.has_value()) return *g;
  const double nd = static_cast<double>(n);
  return nd * nd * nd;
}

double RunConfig::EffectiveZeta() const {
  const double raw = zeta.value_or(alpha / k);
  // The weight grid needs an integral 1/zeta.
  const double steps = std::ceil(1.0 / raw - 1e-9);
  return 1.0 / std::clamp(steps, 2.0, static_cast<double>(kMaxWeightGridSteps));
}

bool RangesDisjoint(const std::vector<StageRange>& ranges) {
  std::vector<std::pair<int64_t, int64_t>> sorted;
  for (const StageRange& r : ranges) {
    if (r.end > r.begin) sorted.emplace_back(r.begin, r.end);
  }
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].first < sorted[i - 1].second) return false;
  }
  return true;
}

nlohmann::json LearnReportToJson(const LearnReport& report,
                                 const RunConfig& config) {
  nlohmann::json out;
  out["result"] = report.bottom ? "bottom" : "ok";
  if (report.mixture.has_value()) {
    out["mixture"] = MixtureToJson(*report.mixture);
  }
  out["candidates"] = CandidatesToJson(report.candidates);
  out["class_size"] = report.class_size;
  out["truncated"] = report.truncated;
  nlohmann::json reads = nlohmann::json::array();
  for (const StageRange& r : report.reads) {
    reads.push_back({{"stage", r.stage}, {"begin", r.begin}, {"end", r.end}});
  }
  out["reads"] = reads;
  out["reads_disjoint"] = RangesDisjoint(report.reads);
  if (report.tv.has_value()) out["tv"] = *report.tv;
  if (report.best_in_class_tv.has_value()) {
    out["best_in_class_tv"] = *report.best_in_class_tv;
    out["class_misses_alpha"] = *report.best_in_class_tv > config.alpha;
  }
  out["config"] = {{"d", config.d},
                   {"k", config.k},
                   {"n", config.n},
                   {"n_prime", config.n_prime},
                   {"eps", config.epsilon},
                   {"delta", config.delta},
                   {"alpha", config.alpha},
                   {"G", config.EffectiveG()},
                   {"zeta", config.EffectiveZeta()},
                   {"cap", config.cap},
                   {"K", config.big_k},
                   {"seed", config.seed},
                   {"mode", FineModeName(config.mode)}};
  out["details"] = report.details;
  return out;
}

absl::StatusOr<LearnReport> LearnUnivariate(
    const RunConfig& config_in, const Dataset& data,
    const std::optional<Mixture>& truth) {
  RunConfig cfg = config_in;
  DPGMM_RETURN_IF_ERROR(cfg.Resolve());
  if (cfg.d != 1 || data.d() != 1) {
    return absl::InvalidArgumentError("learn1d requires d = 1");
  }
  if (truth.has_value() && truth->dim() != 1) {
    return absl::InvalidArgumentError("truth must be univariate");
  }
  if (data.n() < cfg.n + cfg.n_prime) {
    return absl::FailedPreconditionError(
        absl::StrCat("insufficient samples: need ", cfg.n + cfg.n_prime,
                     ", got ", data.n()));
  }
  LearnReport report;
  Stages stages(&report);
  Rng rng(DeriveSeed(cfg.seed, 1));
  const Block all{data, 0};
  DPGMM_ASSIGN_OR_RETURN(const Dataset crude,
                         stages.Read("crude", all, 0, cfg.n));
  DPGMM_ASSIGN_OR_RETURN(
      CandidateSet candidates,
      NoisyCandidates(crude, PrivacyBudget{cfg.epsilon, cfg.delta}, rng));
  if (cfg.max_candidates > 0 &&
      static_cast<int64_t>(candidates.size()) > cfg.max_candidates) {
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.noisy_count > b.noisy_count;
                     });
    candidates.resize(cfg.max_candidates);
    std::sort(candidates.begin(), candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                return a.key < b.key;
              });
  }
  report.candidates = candidates;
  if (candidates.empty()) return report;

  DPGMM_ASSIGN_OR_RETURN(Dataset fresh_rows,
                         data.Slice(cfg.n, cfg.n + cfg.n_prime));
  const Block fresh{std::move(fresh_rows), cfg.n};
  FineContext ctx{cfg, &truth, &report, &rng};
  absl::StatusOr<Mixture> chosen;
  if (cfg.mode == FineMode::kDirect) {
    std::vector<GaussianParams> centers;
    for (const Candidate& c : candidates) {
      DPGMM_ASSIGN_OR_RETURN(GaussianParams g,
                             GaussianParams::Univariate(c.mu, c.var));
      centers.push_back(std::move(g));
    }
    chosen = Direct(ctx, centers, fresh, stages);
  } else {
    const int64_t loc_rows =
        static_cast<int64_t>(kLocalizationShare * cfg.n_prime);
    const int64_t init_rows =
        static_cast<int64_t>(kInitialShare * cfg.n_prime);
    if (loc_rows < 1 || init_rows < 1) return report;
    DPGMM_ASSIGN_OR_RETURN(const Dataset loc,
                           stages.Read("localize", fresh, 0, loc_rows));
    DPGMM_ASSIGN_OR_RETURN(
        const std::vector<GaussianParams> centers,
        Localize(cfg, candidates, loc, rng, &report.details));
    if (centers.empty()) return report;
    DPGMM_ASSIGN_OR_RETURN(Dataset rest,
                           fresh.data.Slice(loc_rows, fresh.data.n()));
    const Block rest_block{std::move(rest), fresh.offset + loc_rows};
    chosen = Refine(ctx, centers, rest_block, init_rows, stages);
  }
  if (!chosen.ok()) {
    if (absl::IsFailedPrecondition(chosen.status())) return report;
    return chosen.status();
  }
  DPGMM_RETURN_IF_ERROR(FinishReport(ctx, *std::move(chosen)));
  return report;
}

absl::StatusOr<LearnReport> AmplifyUnivariate(
    const RunConfig& config_in, const Dataset& data, int repeats,
    const std::optional<Mixture>& truth) {
  if (repeats < 1) return absl::InvalidArgumentError("repeats must be >= 1");
  RunConfig cfg = config_in;
  DPGMM_RETURN_IF_ERROR(cfg.Resolve());
  const int64_t group = cfg.n + cfg.n_prime;
  if (data.n() < group * repeats) {
    return absl::FailedPreconditionError(
        absl::StrCat("insufficient samples: need ", group * repeats,
                     ", got ", data.n()));
  }
  std::vector<LearnReport> runs;
  for (int t = 0; t < repeats; ++t) {
    RunConfig run_cfg = cfg;
    run_cfg.seed = DeriveSeed(cfg.seed, 7, t);
    DPGMM_ASSIGN_OR_RETURN(const Dataset rows,
                           data.Slice(t * group, (t + 1) * group));
    DPGMM_ASSIGN_OR_RETURN(LearnReport run,
                           LearnUnivariate(run_cfg, rows, truth));
    for (StageRange& r : run.reads) {
      r.begin += t * group;
      r.end += t * group;
    }
    runs.push_back(std::move(run));
  }
  std::vector<int> support(repeats, 0);
  for (int i = 0; i < repeats; ++i) {
    if (runs[i].bottom) continue;
    for (int j = 0; j < repeats; ++j) {
      if (runs[j].bottom) continue;
      DPGMM_ASSIGN_OR_RETURN(
          const double tv, ReportTv(*runs[i].mixture, *runs[j].mixture,
                                    DeriveSeed(cfg.seed, 8, i * repeats + j)));
      support[i] += tv <= 2.0 * cfg.alpha ? 1 : 0;
    }
  }
  const int best = static_cast<int>(
      std::max_element(support.begin(), support.end()) - support.begin());
  LearnReport out = runs[best];
  out.reads.clear();
  nlohmann::json per_run = nlohmann::json::array();
  for (const LearnReport& r : runs) {
    out.reads.insert(out.reads.end(), r.reads.begin(), r.reads.end());
    per_run.push_back(r.bottom ? nlohmann::json("bottom")
                               : nlohmann::json(r.tv.value_or(-1.0)));
  }
  out.details["amplify"] = {{"repeats", repeats},
                            {"chosen", best},
                            {"support", support[best]},
                            {"majority", 2 * support[best] > repeats},
                            {"run_tv", per_run}};
  return out;
}

absl::StatusOr<LearnReport> FineStage(
    const RunConfig& config_in, const std::vector<GaussianParams>& crude,
    const Dataset& data, const std::optional<Mixture>& truth) {
  RunConfig cfg = config_in;
  if (cfg.n == 0) cfg.n = std::max<int64_t>(2, data.n());
  if (cfg.n_prime == 0) cfg.n_prime = data.n();
  DPGMM_RETURN_IF_ERROR(cfg.Resolve());
  LearnReport report;
  if (crude.empty()) return report;
  for (const GaussianParams& c : crude) {
    if (c.dim() != cfg.d || data.d() != cfg.d) {
      return absl::InvalidArgumentError("crude centers, data and d differ");
    }
  }
  if (truth.has_value() && truth->dim() != cfg.d) {
    return absl::InvalidArgumentError("truth has the wrong dimension");
  }
  if (cfg.d > kDefaultMaxNetDim) {
    return absl::UnimplementedError(
        absl::StrCat("fine stage supports d <= ", kDefaultMaxNetDim));
  }
  Stages stages(&report);
  Rng rng(DeriveSeed(cfg.seed, 2));
  FineContext ctx{cfg, &truth, &report, &rng};
  const Block block{data, 0};
  absl::StatusOr<Mixture> chosen;
  if (cfg.mode == FineMode::kDirect) {
    chosen = Direct(ctx, crude, block, stages);
  } else {
    const int64_t init_rows =
        static_cast<int64_t>(kFineOnlyInitialShare * data.n());
    if (init_rows < 1) return report;
    chosen = Refine(ctx, crude, block, init_rows, stages);
  }
  if (!chosen.ok()) {
    if (absl::IsFailedPrecondition(chosen.status())) return report;
    return chosen.status();
  }
  DPGMM_RETURN_IF_ERROR(FinishReport(ctx, *std::move(chosen)));
  return report;
}

absl::StatusOr<GaussianParams> NonPrivateMoments(const Dataset& data) {
  const int d = data.d();
  if (data.n() < d + 1) {
    return absl::InvalidArgumentError("need more than d samples");
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  for (int64_t i = 0; i < data.n(); ++i) {
    mean += Eigen::Map<const Eigen::VectorXd>(data.row(i).data(), d);
  }
  mean /= static_cast<double>(data.n());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (int64_t i = 0; i < data.n(); ++i) {
    const Eigen::VectorXd c =
        Eigen::Map<const Eigen::VectorXd>(data.row(i).data(), d) - mean;
    cov += c * c.transpose();
  }
  cov /= static_cast<double>(data.n() - 1);
  return GaussianParams::Create(std::move(mean), std::move(cov));
}

absl::StatusOr<double> ReportTv(const Mixture& a, const Mixture& b,
                                uint64_t seed, int64_t mc_samples) {
  if (a.dim() != b.dim()) {
    return absl::InvalidArgumentError("mixtures differ in dimension");
  }
  if (a.dim() == 1) {
    DPGMM_ASSIGN_OR_RETURN(const TVEstimate est, TvUnivariate(a, b, 1e-6));
    return est.value;
  }
  DPGMM_ASSIGN_OR_RETURN(const TVEstimate est,
                         TvMonteCarlo(a, b, mc_samples, seed));
  return est.value;
}

absl::StatusOr<std::vector<SweepRow>> Sweep(const SweepConfig& config) {
  if (config.n_values.empty() || config.eps_values.empty() ||
      config.alpha_values.empty() || config.trials < 1) {
    return absl::InvalidArgumentError("sweep grid is empty");
  }
  std::vector<SweepRow> rows;
  uint64_t cell = 0;
  for (int64_t n : config.n_values) {
    for (double eps : config.eps_values) {
      for (double alpha : config.alpha_values) {
        for (int t = 0; t < config.trials; ++t) {
          RunConfig cfg = config.base;
          cfg.n = n;
          cfg.n_prime = config.base.n_prime > 0 ? config.base.n_prime : n;
          cfg.epsilon = eps;
          cfg.alpha = alpha;
          cfg.seed = DeriveSeed(config.base.seed, cell, t);
          DPGMM_RETURN_IF_ERROR(cfg.Resolve());
          const auto start = std::chrono::steady_clock::now();
          DPGMM_ASSIGN_OR_RETURN(
              const Dataset data,
              Sample(config.truth, cfg.n + cfg.n_prime,
                     DeriveSeed(cfg.seed, 99)));
          DPGMM_ASSIGN_OR_RETURN(const LearnReport report,
                                 LearnUnivariate(cfg, data, config.truth));
          const auto stop = std::chrono::steady_clock::now();
          rows.push_back(
              {cfg.d, cfg.k, n, eps, cfg.delta, alpha, cfg.seed, t,
               report.tv.value_or(1.0),
               std::chrono::duration_cast<std::chrono::milliseconds>(stop -
                                                                     start)
                   .count(),
               report.class_size, report.bottom});
        }
        ++cell;
      }
    }
  }
  return rows;
}

std::string SweepRowsToCsv(const std::vector<SweepRow>& rows) {
  std::string out = absl::StrCat(kSweepHeader, "\n");
  for (const SweepRow& r : rows) {
    absl::StrAppendFormat(&out, "%d,%d,%d,%.17g,%.17g,%.17g,%d,%d,%.17g,%d,%d,%d\n",
                          r.d, r.k, r.n, r.eps, r.delta, r.alpha, r.seed,
                          r.trial, r.tv, r.wall_ms, r.class_size,
                          r.bottom ? 1 : 0);
  }
  return out;
}

absl::StatusOr<std::vector<SweepRow>> SweepRowsFromCsv(
    const std::string& text) {
  std::vector<std::string> lines =
      absl::StrSplit(text, '\n', absl::SkipEmpty());
  if (lines.empty() || lines.front() != kSweepHeader) {
    return absl::InvalidArgumentError("missing sweep header");
  }
  std::vector<SweepRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    const std::vector<std::string> f = absl::StrSplit(lines[i], ',');
    if (f.size() != 12) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", i + 1, ": expected 12 fields"));
    }
    SweepRow r{};
    int bottom = 0;
    if (!absl::SimpleAtoi(f[0], &r.d) || !absl::SimpleAtoi(f[1], &r.k) ||
        !absl::SimpleAtoi(f[2], &r.n) || !absl::SimpleAtod(f[3], &r.eps) ||
        !absl::SimpleAtod(f[4], &r.delta) ||
        !absl::SimpleAtod(f[5], &r.alpha) ||
        !absl::SimpleAtoi(f[6], &r.seed) ||
        !absl::SimpleAtoi(f[7], &r.trial) || !absl::SimpleAtod(f[8], &r.tv) ||
        !absl::SimpleAtoi(f[9], &r.wall_ms) ||
        !absl::SimpleAtoi(f[10], &r.class_size) ||
        !absl::SimpleAtoi(f[11], &bottom)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", i + 1, ": malformed field"));
    }
    r.bottom = bottom != 0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace dpgmm
