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

#include "dpgmm/nets.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "dpgmm/io.h"
#include "dpgmm/linalg.h"
#include "dpgmm/status_macros.h"

namespace dpgmm {
namespace {

constexpr double kEigenSlack = 1e-12;
constexpr int kSizeEstimateDraws = 20000;

using ParamKey = std::vector<double>;

ParamKey KeyOf(const GaussianParams& g) {
  ParamKey key(g.mean().data(), g.mean().data() + g.mean().size());
  for (int i = 0; i < g.dim(); ++i) {
    for (int j = i; j < g.dim(); ++j) key.push_back(g.cov()(i, j));
  }
  return key;
}

int64_t FloorToInt(long double x) {
  return static_cast<int64_t>(std::floor(x));
}

long double UniformIndex(long double size, Rng& rng) {
  // 64 random bits give a uniform fraction with long double resolution.
  const long double u = std::ldexp(static_cast<long double>(rng()), -64);
  return std::min(std::floor(u * size), size - 1);
}

// Iterates the integer box [ilo, ihi] in odometer order.
template <typename F>
void ForEachLatticePoint(const std::vector<int64_t>& ilo,
                         const std::vector<int64_t>& ihi, const F& visit) {
  std::vector<int64_t> cur = ilo;
  const size_t n = cur.size();
  while (true) {
    visit(cur);
    size_t axis = 0;
    while (axis < n) {
      if (cur[axis] < ihi[axis]) {
        ++cur[axis];
        break;
      }
      cur[axis] = ilo[axis];
      ++axis;
    }
    if (axis == n) return;
  }
}

// A source of Gaussians: exact random access or uniform sampling.
struct ComponentPool {
  long double size = 0;
  bool exact = false;
  std::function<GaussianParams(long double)> at;
  std::function<GaussianParams(Rng&)> sample;
};

absl::StatusOr<HypothesisClass> BuildHypotheses(const ComponentPool& pool,
                                                int k, double zeta,
                                                const HypothesisOptions& opt) {
  if (k < 1 || k > kDefaultMaxComponents) {
    return absl::InvalidArgumentError(
        absl::StrCat("k must lie in [1, ", kDefaultMaxComponents, "]"));
  }
  if (opt.cap < 1) return absl::InvalidArgumentError("cap must be >= 1");
  if (!(pool.size >= 1)) {
    return absl::InvalidArgumentError("union of covers is empty");
  }
  DPGMM_ASSIGN_OR_RETURN(const std::vector<std::vector<double>> weights,
                         WeightGrid(k, zeta));
  HypothesisClass out;
  out.zeta = zeta;
  out.raw_size = std::pow(pool.size, static_cast<long double>(k)) *
                 static_cast<long double>(weights.size());

  std::map<ParamKey, Mixture> distinct;
  auto add = [&](const std::vector<GaussianParams>& comps,
                 const std::vector<double>& w) -> absl::Status {
    std::vector<WeightedComponent> wc;
    wc.reserve(comps.size());
    for (size_t i = 0; i < comps.size(); ++i) wc.push_back({w[i], comps[i]});
    DPGMM_ASSIGN_OR_RETURN(Mixture m, CanonicalMixture(std::move(wc)));
    ParamKey key;
    for (const WeightedComponent& c : m.components()) {
      key.push_back(c.weight);
      const ParamKey pk = KeyOf(c.params);
      key.insert(key.end(), pk.begin(), pk.end());
    }
    distinct.emplace(std::move(key), std::move(m));
    return absl::OkStatus();
  };

  Rng rng(opt.seed);
  if (pool.exact &&
      out.raw_size <= static_cast<long double>(opt.enumerate_limit)) {
    const auto n = static_cast<int64_t>(pool.size);
    std::vector<GaussianParams> elems;
    elems.reserve(n);
    for (int64_t i = 0; i < n; ++i) {
      elems.push_back(pool.at(static_cast<long double>(i)));
    }
    std::vector<GaussianParams> comps(k, elems.front());
    ForEachLatticePoint(
        std::vector<int64_t>(k, 0), std::vector<int64_t>(k, n - 1),
        [&](const std::vector<int64_t>& idx) {
          for (int i = 0; i < k; ++i) comps[i] = elems[idx[i]];
          for (const std::vector<double>& w : weights) {
            add(comps, w).IgnoreError();
          }
        });
    if (static_cast<int64_t>(distinct.size()) > opt.cap) {
      std::vector<const Mixture*> all;
      all.reserve(distinct.size());
      for (const auto& [key, m] : distinct) all.push_back(&m);
      std::vector<size_t> order(all.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(opt.cap);
      std::sort(order.begin(), order.end());
      for (size_t i : order) out.hypotheses.push_back(*all[i]);
      out.truncated = true;
      return out;
    }
  } else {
    std::uniform_int_distribution<size_t> pick_w(0, weights.size() - 1);
    const int64_t attempts = std::max<int64_t>(50 * opt.cap, 10000);
    std::vector<GaussianParams> comps;
    for (int64_t t = 0;
         t < attempts && static_cast<int64_t>(distinct.size()) < opt.cap;
         ++t) {
      comps.clear();
      for (int i = 0; i < k; ++i) comps.push_back(pool.sample(rng));
      DPGMM_RETURN_IF_ERROR(add(comps, weights[pick_w(rng)]));
    }
    out.truncated = out.raw_size > static_cast<long double>(distinct.size());
  }
  for (auto& [key, m] : distinct) out.hypotheses.push_back(std::move(m));
  if (out.hypotheses.empty()) {
    return absl::InternalError("no hypotheses produced");
  }
  return out;
}

}  // namespace

absl::StatusOr<CrudeBall> CrudeBall::Create(GaussianParams center, double g) {
  if (!(g >= 1.0) || !std::isfinite(g)) {
    return absl::InvalidArgumentError("G must be finite and >= 1");
  }
  return CrudeBall{std::move(center), g};
}

absl::StatusOr<GaussianNet> GaussianNet::Build(const CrudeBall& ball,
                                               double zeta,
                                               const NetOptions& options) {
  if (!(zeta > 0.0 && zeta < 1.0)) {
    return absl::InvalidArgumentError("zeta must lie in (0, 1)");
  }
  const int d = ball.center.dim();
  if (d > options.max_dim) {
    return absl::UnimplementedError(absl::StrCat(
        "nets are supported up to d = ", options.max_dim, ", got ", d));
  }
  if (!(ball.g >= 1.0)) return absl::InvalidArgumentError("G must be >= 1");
  GaussianNet net(ball, zeta);
  if (d == 1) {
    DPGMM_RETURN_IF_ERROR(net.BuildUnivariate());
  } else {
    DPGMM_RETURN_IF_ERROR(net.BuildLattice(options));
  }
  return net;
}

absl::Status GaussianNet::BuildUnivariate() {
  const double g = ball_.g;
  const double r = 1.0 + 0.5 * zeta_;
  int64_t levels = FloorToInt(std::log(g) / std::log(r));
  while (levels > 0 && std::pow(r, static_cast<double>(levels)) > g) --levels;
  if (levels > 100000) {
    return absl::ResourceExhaustedError("too many variance levels");
  }
  long double offset = 0;
  for (int64_t j = -levels; j <= levels; ++j) {
    const double var0 = std::pow(r, static_cast<double>(j));
    const double sd0 = std::sqrt(var0);
    const double h = zeta_ * sd0;
    long double half = std::floor(static_cast<long double>(g) / h);
    // Past 2^64 a unit step is below one ulp, so step by ulps instead.
    while (half > 0 && half * h > g) half = std::floor(std::nextafter(half, 0.0L));
    level_sd_.push_back(sd0);
    level_half_count_.push_back(half);
    level_offset_.push_back(offset);
    offset += 2 * half + 1;
  }
  univariate_size_ = offset;
  return absl::OkStatus();
}

bool GaussianNet::MeanValid(const Eigen::VectorXd& mu0) const {
  return mu0.norm() <= ball_.g * (1.0 + kEigenSlack);
}

bool GaussianNet::CovValid(const Eigen::VectorXd& entries) const {
  const int d = dim();
  Eigen::MatrixXd s(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      s(i, j) = entries(idx);
      s(j, i) = entries(idx);
      ++idx;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s,
                                                    Eigen::EigenvaluesOnly);
  const double g = ball_.g;
  return es.eigenvalues().minCoeff() >= (1.0 / g) * (1.0 - kEigenSlack) &&
         es.eigenvalues().maxCoeff() <= g * (1.0 + kEigenSlack);
}

absl::Status GaussianNet::BuildLattice(const NetOptions& options) {
  const int d = dim();
  const double g = ball_.g;
  const double g_prime = g * std::sqrt(static_cast<double>(d)) / zeta_;
  const double step = 1.0 / g_prime;
  const int64_t reach = FloorToInt(static_cast<long double>(g) * g_prime);
  const int64_t diag_lo =
      static_cast<int64_t>(std::ceil(g_prime / g - kEigenSlack));

  mean_factor_.base = Eigen::VectorXd::Zero(d);
  mean_factor_.ilo.assign(d, -reach);
  mean_factor_.ihi.assign(d, reach);
  const int cov_dim = d * (d + 1) / 2;
  cov_factor_.base = Eigen::VectorXd::Zero(cov_dim);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      cov_factor_.ilo.push_back(i == j ? diag_lo : -reach);
      cov_factor_.ihi.push_back(reach);
    }
  }
  Rng rng(options.size_estimate_seed);
  for (int f = 0; f < 2; ++f) {
    LatticeFactor& factor = f == 0 ? mean_factor_ : cov_factor_;
    const bool is_mean = f == 0;
    factor.step = step;
    factor.box_count = 1;
    for (size_t i = 0; i < factor.ilo.size(); ++i) {
      factor.box_count *= factor.ihi[i] - factor.ilo[i] + 1;
    }
    auto valid = [&](const Eigen::VectorXd& v) {
      return is_mean ? MeanValid(v) : CovValid(v);
    };
    if (factor.box_count <=
        static_cast<long double>(options.enumerate_limit)) {
      Eigen::VectorXd v(factor.ilo.size());
      ForEachLatticePoint(factor.ilo, factor.ihi,
                          [&](const std::vector<int64_t>& idx) {
                            for (size_t i = 0; i < idx.size(); ++i) {
                              v(i) = idx[i] * step;
                            }
                            if (valid(v)) factor.points.push_back(v);
                          });
      factor.enumerated = true;
      factor.valid_estimate = factor.points.size();
      if (factor.points.empty()) {
        return absl::InternalError("empty lattice factor");
      }
    } else {
      int hits = 0;
      for (int t = 0; t < kSizeEstimateDraws; ++t) {
        Eigen::VectorXd v(factor.ilo.size());
        for (size_t i = 0; i < factor.ilo.size(); ++i) {
          std::uniform_int_distribution<int64_t> u(factor.ilo[i],
                                                   factor.ihi[i]);
          v(i) = u(rng) * step;
        }
        hits += valid(v) ? 1 : 0;
      }
      if (hits == 0) {
        return absl::ResourceExhaustedError(
            "lattice factor too sparse to sample");
      }
      factor.valid_estimate =
          factor.box_count * hits / static_cast<long double>(kSizeEstimateDraws);
    }
  }
  DPGMM_ASSIGN_OR_RETURN(center_root_, SymmetricSqrt(ball_.center.cov()));
  return absl::OkStatus();
}

long double GaussianNet::size() const {
  if (dim() == 1) return univariate_size_;
  return mean_factor_.valid_estimate * cov_factor_.valid_estimate;
}

bool GaussianNet::size_is_exact() const {
  return dim() == 1 || (mean_factor_.enumerated && cov_factor_.enumerated);
}

GaussianParams GaussianNet::PushUnivariate(double mu0, double var0) const {
  const double sd = ball_.center.stddev1();
  return GaussianParams::Univariate(sd * mu0 + ball_.center.mean1(),
                                    ball_.center.variance1() * var0)
      .value();
}

GaussianParams GaussianNet::Push(const Eigen::VectorXd& mu0,
                                 const Eigen::VectorXd& cov_entries) const {
  const int d = dim();
  Eigen::MatrixXd s0(d, d);
  int idx = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      s0(i, j) = cov_entries(idx);
      s0(j, i) = cov_entries(idx);
      ++idx;
    }
  }
  Eigen::MatrixXd cov = center_root_ * s0 * center_root_;
  cov = 0.5 * (cov + cov.transpose());
  return GaussianParams::Create(center_root_ * mu0 + ball_.center.mean(),
                                std::move(cov))
      .value();
}

absl::StatusOr<GaussianParams> GaussianNet::At(long double idx) const {
  if (!size_is_exact()) {
    return absl::FailedPreconditionError("net is not enumerated");
  }
  if (!(idx >= 0 && idx < size())) {
    return absl::OutOfRangeError("net index out of range");
  }
  if (dim() == 1) {
    const auto it = std::upper_bound(level_offset_.begin(),
                                     level_offset_.end(), idx);
    const size_t level = static_cast<size_t>(it - level_offset_.begin()) - 1;
    const long double m =
        idx - level_offset_[level] - level_half_count_[level];
    const double sd0 = level_sd_[level];
    return PushUnivariate(static_cast<double>(m * zeta_ * sd0), sd0 * sd0);
  }
  const auto i = static_cast<uint64_t>(idx);
  const uint64_t nc = cov_factor_.points.size();
  return Push(mean_factor_.points[i / nc], cov_factor_.points[i % nc]);
}

Eigen::VectorXd GaussianNet::SampleFactor(const LatticeFactor& f,
                                          bool is_mean, Rng& rng) const {
  if (f.enumerated) {
    std::uniform_int_distribution<size_t> u(0, f.points.size() - 1);
    return f.points[u(rng)];
  }
  Eigen::VectorXd v(f.ilo.size());
  while (true) {
    for (size_t i = 0; i < f.ilo.size(); ++i) {
      std::uniform_int_distribution<int64_t> u(f.ilo[i], f.ihi[i]);
      v(i) = u(rng) * f.step;
    }
    if (is_mean ? MeanValid(v) : CovValid(v)) return v;
  }
}

GaussianParams GaussianNet::SampleUniform(Rng& rng) const {
  if (dim() == 1) return At(UniformIndex(univariate_size_, rng)).value();
  return Push(SampleFactor(mean_factor_, true, rng),
              SampleFactor(cov_factor_, false, rng));
}

absl::StatusOr<std::vector<GaussianParams>> GaussianNet::Materialize(
    int64_t limit) const {
  if (!size_is_exact()) {
    return absl::ResourceExhaustedError("net is too large to enumerate");
  }
  if (size() > static_cast<long double>(limit)) {
    return absl::ResourceExhaustedError(
        absl::StrCat("net has ", static_cast<double>(size()),
                     " points, limit ", limit));
  }
  const auto n = static_cast<int64_t>(size());
  std::vector<GaussianParams> out;
  out.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    DPGMM_ASSIGN_OR_RETURN(GaussianParams g, At(static_cast<long double>(i)));
    out.push_back(std::move(g));
  }
  return out;
}

absl::StatusOr<std::vector<GaussianParams>> GaussianCover(
    const CrudeBall& ball, double zeta, int d, int64_t max_points,
    const NetOptions& options) {
  if (d != ball.center.dim()) {
    return absl::InvalidArgumentError("d does not match the ball");
  }
  DPGMM_ASSIGN_OR_RETURN(const GaussianNet net,
                         GaussianNet::Build(ball, zeta, options));
  return net.Materialize(max_points);
}

absl::StatusOr<std::vector<std::vector<double>>> WeightGrid(int k,
                                                            double zeta) {
  if (k < 1) return absl::InvalidArgumentError("k must be >= 1");
  if (!(zeta > 0.0) || !(zeta <= 1.0)) {
    return absl::InvalidArgumentError("zeta must lie in (0, 1]");
  }
  const double inv = 1.0 / zeta;
  const auto m = static_cast<int>(std::llround(inv));
  if (m > kMaxWeightGridSteps) {
    return absl::FailedPreconditionError(absl::StrCat(
        "1/zeta = ", inv, " exceeds the cap ", kMaxWeightGridSteps));
  }
  if (std::abs(inv - m) > 1e-9 * inv) {
    return absl::InvalidArgumentError("1/zeta must be an integer");
  }
  std::vector<std::vector<double>> out;
  std::vector<int> parts(k, 0);
  // Lexicographic enumeration of compositions of m into k parts.
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == k - 1) {
      parts[pos] = left;
      std::vector<double> w(k);
      for (int i = 0; i < k; ++i) {
        w[i] = static_cast<double>(parts[i]) / m;
      }
      out.push_back(std::move(w));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      parts[pos] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, m);
  return out;
}

absl::StatusOr<Mixture> CanonicalMixture(
    std::vector<WeightedComponent> components) {
  std::vector<std::pair<ParamKey, WeightedComponent>> keyed;
  for (WeightedComponent& c : components) {
    if (c.weight == 0.0) continue;
    keyed.emplace_back(KeyOf(c.params), std::move(c));
  }
  if (keyed.empty()) return absl::InvalidArgumentError("all weights zero");
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<WeightedComponent> merged;
  const ParamKey* last = nullptr;
  for (auto& [key, c] : keyed) {
    if (last != nullptr && *last == key) {
      merged.back().weight += c.weight;
    } else {
      merged.push_back(std::move(c));
    }
    last = &key;
  }
  return Mixture::Create(std::move(merged));
}

absl::StatusOr<HypothesisClass> MixtureHypotheses(
    const std::vector<std::vector<GaussianParams>>& covers, int k,
    double zeta, const HypothesisOptions& options) {
  std::map<ParamKey, const GaussianParams*> uniq;
  int d = -1;
  for (const auto& cover : covers) {
    for (const GaussianParams& g : cover) {
      if (d >= 0 && g.dim() != d) {
        return absl::InvalidArgumentError("covers differ in dimension");
      }
      d = g.dim();
      uniq.emplace(KeyOf(g), &g);
    }
  }
  auto elems = std::make_shared<std::vector<GaussianParams>>();
  for (const auto& [key, g] : uniq) elems->push_back(*g);
  ComponentPool pool;
  pool.size = elems->size();
  pool.exact = true;
  pool.at = [elems](long double i) {
    return (*elems)[static_cast<size_t>(i)];
  };
  pool.sample = [elems](Rng& rng) {
    std::uniform_int_distribution<size_t> u(0, elems->size() - 1);
    return (*elems)[u(rng)];
  };
  return BuildHypotheses(pool, k, zeta, options);
}

absl::StatusOr<HypothesisClass> MixtureHypotheses(
    const std::vector<GaussianNet>& nets, int k, double zeta,
    const HypothesisOptions& options) {
  ComponentPool pool;
  pool.exact = true;
  std::vector<long double> offsets;
  for (const GaussianNet& net : nets) {
    if (net.dim() != nets.front().dim()) {
      return absl::InvalidArgumentError("nets differ in dimension");
    }
    offsets.push_back(pool.size);
    pool.size += net.size();
    pool.exact = pool.exact && net.size_is_exact();
  }
  const long double total = pool.size;
  pool.at = [&nets, offsets](long double i) {
    const size_t which = static_cast<size_t>(
        std::upper_bound(offsets.begin(), offsets.end(), i) -
        offsets.begin() - 1);
    return nets[which].At(i - offsets[which]).value();
  };
  pool.sample = [&nets, offsets, total](Rng& rng) {
    const long double u = UniformIndex(total, rng);
    const size_t which = static_cast<size_t>(
        std::upper_bound(offsets.begin(), offsets.end(), u) -
        offsets.begin() - 1);
    return nets[which].SampleUniform(rng);
  };
  return BuildHypotheses(pool, k, zeta, options);
}

nlohmann::json HypothesisClassToJson(const HypothesisClass& h) {
  nlohmann::json list = nlohmann::json::array();
  for (const Mixture& m : h.hypotheses) list.push_back(MixtureToJson(m));
  return {{"zeta", h.zeta},
          {"truncated", h.truncated},
          {"raw_size", static_cast<double>(h.raw_size)},
          {"hypotheses", std::move(list)}};
}

}  // namespace dpgmm
