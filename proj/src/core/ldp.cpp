// Copyright 2026 The epsaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/ldp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace epsaudit {

namespace {

void validate_request(double gamma, double delta) {
  if (!(gamma > 0)) throw std::invalid_argument("precision gamma must be positive");
  if (!(delta > 0) || !(delta < 1)) {
    throw std::invalid_argument("confidence delta must lie in (0,1)");
  }
}

double tau_of(double lipschitz_c, double width) {
  return 1.0 / width - lipschitz_c * width / 2.0;
}

}  // namespace

double ldp_plan_lhs(int m, double w_tau, double gamma, std::uint64_t n) {
  const double x = static_cast<double>(n);
  const double miss_term =
      w_tau >= 1.0 ? 0.0 : 2.0 * m * std::exp(x * std::log1p(-w_tau));
  return miss_term + 4.0 * concentration_f(x, w_tau, gamma / 12.0);
}

LdpPlan plan_ldp(double gamma, double delta, double lipschitz_c, Interval support,
                 std::uint64_t n_cap) {
  validate_request(gamma, delta);
  if (!(lipschitz_c >= 0)) throw std::invalid_argument("C must be nonnegative");
  const double width = support.width();
  if (!(lipschitz_c < 2.0 / (width * width))) {
    throw InapplicableError(
        "claimed C = " + std::to_string(lipschitz_c) +
        " is not below 2/W^2 = " + std::to_string(2.0 / (width * width)) +
        ", so no plan carries a guarantee; fall back to practical mode with "
        "hand-chosen n and m (a workable default is m = ceil(100/gamma) = " +
        std::to_string(static_cast<long long>(std::ceil(100.0 / gamma))) + ")");
  }

  LdpPlan plan;
  plan.gamma = gamma;
  plan.delta = delta;
  plan.lipschitz_c = lipschitz_c;
  plan.support = support;
  plan.tau = tau_of(lipschitz_c, width);
  plan.m = std::max(
      1, static_cast<int>(std::ceil(6.0 * lipschitz_c * width / (plan.tau * gamma))));
  plan.w = width / plan.m;
  const double w_tau = plan.w * plan.tau;
  plan.n = min_n_satisfying(
      [&](std::uint64_t n) { return ldp_plan_lhs(plan.m, w_tau, gamma, n) <= 1.0 - delta; },
      n_cap);
  plan.guarantee = Guarantee::theoretical;
  return plan;
}

LdpPlan plan_ldp_practical(double gamma, double delta, double lipschitz_c,
                           Interval support, int m, std::uint64_t n) {
  validate_request(gamma, delta);
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  LdpPlan plan;
  plan.gamma = gamma;
  plan.delta = delta;
  plan.lipschitz_c = lipschitz_c;
  plan.support = support;
  plan.tau = tau_of(lipschitz_c, support.width());
  plan.m = m;
  plan.w = support.width() / m;
  plan.n = n;
  plan.guarantee = Guarantee::practical;
  return plan;
}

namespace {

// Shared scan for the bin log-ratios. Equal counts short-circuit to an
// exact zero before any floating log enters; ties keep the lowest index.
template <bool kTwoSided>
double log_ratio_max(const HistogramPair& hist, int* argmax_bin) {
  double best = -std::numeric_limits<double>::infinity();
  int best_bin = -1;
  for (std::size_t j = 0; j < hist.counts_p.size(); ++j) {
    const std::uint64_t nj = hist.counts_p[j];
    const std::uint64_t mj = hist.counts_q[j];
    double value;
    if (nj == mj) {
      value = 0.0;
    } else {
      value = std::log(static_cast<double>(nj)) - std::log(static_cast<double>(mj));
      if constexpr (kTwoSided) value = std::abs(value);
    }
    if (value > best) {
      best = value;
      best_bin = static_cast<int>(j);
    }
  }
  if (best_bin < 0) throw std::invalid_argument("histogram has no bins");
  if (argmax_bin != nullptr) *argmax_bin = best_bin;
  return best;
}

}  // namespace

double directed_log_ratio_max(const HistogramPair& histogram, int* argmax_bin) {
  return log_ratio_max<false>(histogram, argmax_bin);
}

double symmetric_log_ratio_max(const HistogramPair& histogram, int* argmax_bin) {
  return log_ratio_max<true>(histogram, argmax_bin);
}

PairEstimate estimate_pair_ldp(const Mechanism& mechanism, double x1, double x2,
                               const LdpPlan& plan, std::uint64_t seed,
                               Direction direction) {
  if (x1 == x2) throw std::invalid_argument("the pair must be two distinct secrets");
  if (mechanism.is_discrete()) {
    throw std::invalid_argument(
        "finite output domains use the discrete estimator, not the binned one");
  }
  BinGrid grid(plan.support, plan.m);

  PairEstimate estimate;
  estimate.direction = direction;
  estimate.seed = seed;
  estimate.histogram.n = plan.n;
  estimate.histogram.counts_p =
      sampled_bin_counts(mechanism, x1, plan.n, child_seed(seed, 0), grid);
  estimate.histogram.counts_q =
      sampled_bin_counts(mechanism, x2, plan.n, child_seed(seed, 1), grid);

  if (estimate.histogram.has_empty_bin()) {
    estimate.status = PairEstimate::Status::failed_empty_bin;
    return estimate;
  }
  estimate.status = PairEstimate::Status::succeeded;
  estimate.epsilon_hat = direction == Direction::symmetric
                             ? symmetric_log_ratio_max(estimate.histogram,
                                                       &estimate.argmax_bin)
                             : directed_log_ratio_max(estimate.histogram,
                                                      &estimate.argmax_bin);
  return estimate;
}

int ldp_grid_bucket_count(double lipschitz_d, Interval secrets, double tau,
                          double gamma) {
  if (!(lipschitz_d >= 0)) throw std::invalid_argument("D must be nonnegative");
  if (!(tau > 0)) throw InapplicableError("grid sizing needs tau > 0 (C < 2/W^2)");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  const double required = 3.0 * lipschitz_d * secrets.width() / (tau * gamma);
  return std::max(2, static_cast<int>(std::ceil(required)));
}

std::vector<double> grid_midpoints(Interval secrets, int k) {
  std::vector<double> mids(k);
  const double bucket = secrets.width() / k;
  for (int i = 0; i < k; ++i) {
    mids[i] = secrets.lo + (i + 0.5) * bucket;
  }
  return mids;
}

GridEstimate estimate_grid_ldp(const Mechanism& mechanism, double gamma,
                               double delta, double lipschitz_c,
                               double lipschitz_d, Interval secrets,
                               std::uint64_t seed, const GridOptions& options,
                               LdpPlan* inner_plan_out) {
  validate_request(gamma, delta);
  const double inner_gamma = gamma / 3.0;
  const double inner_delta = std::sqrt(delta);
  const Interval support =
      mechanism.output_interval();  // continuous mechanisms only

  LdpPlan inner_plan;
  if (options.m_override || options.n_override) {
    if (!options.m_override || !options.n_override) {
      throw std::invalid_argument("practical mode needs both m and n overrides");
    }
    inner_plan = plan_ldp_practical(inner_gamma, inner_delta, lipschitz_c, support,
                                    *options.m_override, *options.n_override);
  } else {
    inner_plan = plan_ldp(inner_gamma, inner_delta, lipschitz_c, support);
  }

  GridEstimate grid;
  grid.seed = seed;
  if (options.k_override) {
    if (*options.k_override < 2) throw std::invalid_argument("k must be >= 2");
    grid.k = *options.k_override;
  } else {
    grid.k = ldp_grid_bucket_count(lipschitz_d, secrets,
                                   tau_of(lipschitz_c, support.width()), gamma);
  }
  grid.midpoints = grid_midpoints(secrets, grid.k);

  const std::size_t pair_count =
      static_cast<std::size_t>(grid.k) * (grid.k - 1) / 2;
  grid.pairs.resize(pair_count);
  std::size_t t = 0;
  for (int i = 0; i < grid.k; ++i) {
    for (int j = i + 1; j < grid.k; ++j) {
      grid.pairs[t].i = i;
      grid.pairs[t].j = j;
      ++t;
    }
  }

  parallel_for(pair_count, options.workers, [&](std::size_t idx) {
    GridPairOutcome& out = grid.pairs[idx];
    const PairEstimate estimate = estimate_pair_ldp(
        mechanism, grid.midpoints[out.i], grid.midpoints[out.j], inner_plan,
        child_seed(seed, idx), options.direction);
    out.succeeded = estimate.succeeded();
    out.epsilon_hat = estimate.epsilon_hat;
  });

  // Deterministic merge: first lexicographic (i, j) wins ties.
  grid.succeeded = false;
  for (const GridPairOutcome& out : grid.pairs) {
    if (!out.succeeded) continue;
    if (!grid.succeeded || out.epsilon_hat > grid.epsilon_hat) {
      grid.succeeded = true;
      grid.epsilon_hat = out.epsilon_hat;
      grid.argmax_i = out.i;
      grid.argmax_j = out.j;
    }
  }
  if (inner_plan_out != nullptr) *inner_plan_out = inner_plan;
  return grid;
}

DiscreteLdpPlan plan_ldp_discrete(double gamma, double delta, double p_min,
                                  int category_count, std::uint64_t n_cap) {
  validate_request(gamma, delta);
  if (!(p_min > 0) || p_min > 1) {
    throw std::domain_error("p_min must be a probability lower bound in (0,1]");
  }
  if (category_count < 2) throw std::invalid_argument("need at least 2 categories");
  DiscreteLdpPlan plan;
  plan.gamma = gamma;
  plan.delta = delta;
  plan.p_min = p_min;
  plan.m = category_count;
  plan.n = min_n_satisfying(
      [&](std::uint64_t n) {
        return ldp_plan_lhs(plan.m, p_min, gamma, n) <= 1.0 - delta;
      },
      n_cap);
  plan.guarantee = Guarantee::theoretical;
  return plan;
}

PairEstimate estimate_discrete_ldp(const Mechanism& mechanism, double x1,
                                   double x2, const DiscreteLdpPlan& plan,
                                   std::uint64_t seed, Direction direction) {
  if (x1 == x2) throw std::invalid_argument("the pair must be two distinct secrets");
  if (!mechanism.is_discrete()) {
    throw std::invalid_argument("discrete estimation needs a finite output domain");
  }
  if (mechanism.category_count() != plan.m) {
    throw std::invalid_argument("plan category count does not match the mechanism");
  }

  PairEstimate estimate;
  estimate.direction = direction;
  estimate.seed = seed;
  estimate.histogram.n = plan.n;
  estimate.histogram.counts_p =
      sampled_category_counts(mechanism, x1, plan.n, child_seed(seed, 0), plan.m);
  estimate.histogram.counts_q =
      sampled_category_counts(mechanism, x2, plan.n, child_seed(seed, 1), plan.m);

  if (estimate.histogram.has_empty_bin()) {
    estimate.status = PairEstimate::Status::failed_empty_bin;
    return estimate;
  }
  estimate.status = PairEstimate::Status::succeeded;
  estimate.epsilon_hat = direction == Direction::symmetric
                             ? symmetric_log_ratio_max(estimate.histogram,
                                                       &estimate.argmax_bin)
                             : directed_log_ratio_max(estimate.histogram,
                                                      &estimate.argmax_bin);
  return estimate;
}

}  // namespace epsaudit
