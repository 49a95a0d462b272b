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

#include "core/lrdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace epsaudit {

namespace {

void validate_order(double alpha) {
  if (!(alpha > 1) || !std::isfinite(alpha)) {
    throw std::invalid_argument("Renyi order alpha must be finite and > 1");
  }
}

void validate_request(double gamma, double delta) {
  if (!(gamma > 0)) throw std::invalid_argument("precision gamma must be positive");
  if (!(delta > 0) || !(delta < 1)) {
    throw std::invalid_argument("confidence delta must lie in (0,1)");
  }
}

struct LrdpConstants {
  double tau0, tau1, k_upper, k_lower, gamma_prime;
};

LrdpConstants lrdp_constants(double alpha, double gamma, double lipschitz_c,
                             double width) {
  LrdpConstants c;
  c.tau0 = 1.0 / width - lipschitz_c * width / 2.0;
  c.tau1 = 1.0 / width + lipschitz_c * width / 2.0;
  c.k_upper = 2.0 * std::pow(c.tau1, alpha) / std::pow(c.tau0, alpha - 1.0);
  c.k_lower = std::pow(c.tau0, alpha) / std::pow(c.tau1, alpha - 1.0);
  c.gamma_prime =
      std::min(gamma * c.k_lower * (alpha - 1.0) / (2.0 * c.k_upper * (2.0 * alpha - 1.0)),
               std::log(2.0) / (2.0 * alpha - 1.0));
  return c;
}

}  // namespace

double lrdp_plan_success_bound(int m, double w_tau0, double gamma_prime,
                               std::uint64_t n) {
  const double x = static_cast<double>(n);
  const double miss_term =
      w_tau0 >= 1.0 ? 0.0 : 2.0 * m * std::exp(x * std::log1p(-w_tau0));
  return 1.0 - miss_term - 2.0 * m * concentration_f(x, w_tau0, gamma_prime);
}

LrdpPlan plan_lrdp(double alpha, double gamma, double delta, double lipschitz_c,
                   Interval support, std::uint64_t n_cap) {
  validate_order(alpha);
  validate_request(gamma, delta);
  if (!(lipschitz_c >= 0)) throw std::invalid_argument("C must be nonnegative");
  const double width = support.width();
  if (!(lipschitz_c < 2.0 / (width * width))) {
    throw InapplicableError(
        "claimed C = " + std::to_string(lipschitz_c) + " is not below 2/W^2 = " +
        std::to_string(2.0 / (width * width)) +
        ", so no plan carries a guarantee; fall back to practical mode");
  }

  LrdpPlan plan;
  plan.alpha = alpha;
  plan.gamma = gamma;
  plan.delta = delta;
  plan.lipschitz_c = lipschitz_c;
  plan.support = support;
  const LrdpConstants c = lrdp_constants(alpha, gamma, lipschitz_c, width);
  plan.tau0 = c.tau0;
  plan.tau1 = c.tau1;
  plan.k_upper = c.k_upper;
  plan.k_lower = c.k_lower;
  plan.gamma_prime = c.gamma_prime;

  // Smallest m with C w K (2a-1) / (2 tau0 K' (a-1)) <= gamma/2, w = W/m.
  const double m_required = lipschitz_c * width * c.k_upper * (2.0 * alpha - 1.0) /
                            (gamma * c.tau0 * c.k_lower * (alpha - 1.0));
  plan.m = std::max(1, static_cast<int>(std::ceil(m_required)));
  plan.w = width / plan.m;

  const double w_tau0 = plan.w * c.tau0;
  plan.n = min_n_satisfying(
      [&](std::uint64_t n) {
        return lrdp_plan_success_bound(plan.m, w_tau0, c.gamma_prime, n) >= delta;
      },
      n_cap);
  plan.guarantee = Guarantee::theoretical;

  // Back-substitution self-check of the two plan inequalities.
  const double bin_error = lipschitz_c * plan.w * c.k_upper * (2.0 * alpha - 1.0) /
                           (2.0 * c.tau0 * c.k_lower * (alpha - 1.0));
  if (!(bin_error <= gamma / 2.0 * (1 + 1e-12)) ||
      !(lrdp_plan_success_bound(plan.m, w_tau0, c.gamma_prime, plan.n) >= delta)) {
    throw std::logic_error("constructed plan violates its own inequalities");
  }
  return plan;
}

LrdpPlan plan_lrdp_practical(double alpha, double gamma, double delta,
                             double lipschitz_c, Interval support, int m,
                             std::uint64_t n) {
  validate_order(alpha);
  validate_request(gamma, delta);
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  LrdpPlan plan;
  plan.alpha = alpha;
  plan.gamma = gamma;
  plan.delta = delta;
  plan.lipschitz_c = lipschitz_c;
  plan.support = support;
  const LrdpConstants c = lrdp_constants(alpha, gamma, lipschitz_c, support.width());
  plan.tau0 = c.tau0;
  plan.tau1 = c.tau1;
  plan.k_upper = c.k_upper;
  plan.k_lower = c.k_lower;
  plan.gamma_prime = c.gamma_prime;
  plan.m = m;
  plan.w = support.width() / m;
  plan.n = n;
  plan.guarantee = Guarantee::practical;
  return plan;
}

double renyi_plugin(const HistogramPair& histogram, double alpha) {
  validate_order(alpha);
  if (histogram.counts_p.empty() || histogram.n == 0) {
    throw std::invalid_argument("histogram is empty");
  }
  if (histogram.has_empty_bin()) {
    throw std::invalid_argument("plug-in requires every bin populated on both sides");
  }
  // log sum_j exp(t_j), t_j = alpha(log N_j - log M_j) + log M_j - log n,
  // max-shifted so one term is exp(0).
  const double log_n = std::log(static_cast<double>(histogram.n));
  std::vector<double> terms(histogram.counts_p.size());
  double t_max = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < terms.size(); ++j) {
    const double log_nj = std::log(static_cast<double>(histogram.counts_p[j]));
    const double log_mj = std::log(static_cast<double>(histogram.counts_q[j]));
    terms[j] = alpha * (log_nj - log_mj) + log_mj - log_n;
    t_max = std::max(t_max, terms[j]);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - t_max);
  return (t_max + std::log(sum)) / (alpha - 1.0);
}

double renyi_plugin_symmetric(const HistogramPair& histogram, double alpha) {
  HistogramPair swapped;
  swapped.counts_p = histogram.counts_q;
  swapped.counts_q = histogram.counts_p;
  swapped.n = histogram.n;
  return std::max(renyi_plugin(histogram, alpha), renyi_plugin(swapped, alpha));
}

PairEstimate estimate_pair_lrdp(const Mechanism& mechanism, double x1, double x2,
                                const LrdpPlan& plan, std::uint64_t seed,
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
                             ? renyi_plugin_symmetric(estimate.histogram, plan.alpha)
                             : renyi_plugin(estimate.histogram, plan.alpha);
  return estimate;
}

int lrdp_grid_bucket_count(double alpha, double lipschitz_c, double lipschitz_d,
                           Interval secrets, Interval support, double gamma) {
  validate_order(alpha);
  if (!(lipschitz_d >= 0)) throw std::invalid_argument("D must be nonnegative");
  if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
  const LrdpConstants c = lrdp_constants(alpha, gamma, lipschitz_c, support.width());
  if (!(c.tau0 > 0)) {
    throw InapplicableError("grid sizing needs tau0 > 0 (C < 2/W^2)");
  }
  const double required = 3.0 * (2.0 * alpha - 1.0) * c.k_upper * lipschitz_d *
                          secrets.width() /
                          (2.0 * (alpha - 1.0) * c.k_lower * c.tau0 * gamma);
  return std::max(2, static_cast<int>(std::ceil(required)));
}

GridEstimate estimate_grid_lrdp(const Mechanism& mechanism, double alpha,
                                double gamma, double delta, double lipschitz_c,
                                double lipschitz_d, Interval secrets,
                                std::uint64_t seed, const GridOptions& options,
                                LrdpPlan* inner_plan_out) {
  validate_order(alpha);
  validate_request(gamma, delta);
  const double inner_gamma = gamma / 3.0;
  const double inner_delta = std::sqrt(delta);
  const Interval support = mechanism.output_interval();

  LrdpPlan inner_plan;
  if (options.m_override || options.n_override) {
    if (!options.m_override || !options.n_override) {
      throw std::invalid_argument("practical mode needs both m and n overrides");
    }
    inner_plan = plan_lrdp_practical(alpha, inner_gamma, inner_delta, lipschitz_c,
                                     support, *options.m_override,
                                     *options.n_override);
  } else {
    inner_plan = plan_lrdp(alpha, inner_gamma, inner_delta, lipschitz_c, support);
  }

  GridEstimate grid;
  grid.seed = seed;
  if (options.k_override) {
    if (*options.k_override < 2) throw std::invalid_argument("k must be >= 2");
    grid.k = *options.k_override;
  } else {
    grid.k = lrdp_grid_bucket_count(alpha, lipschitz_c, lipschitz_d, secrets,
                                    support, gamma);
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
    const PairEstimate estimate = estimate_pair_lrdp(
        mechanism, grid.midpoints[out.i], grid.midpoints[out.j], inner_plan,
        child_seed(seed, idx), options.direction);
    out.succeeded = estimate.succeeded();
    out.epsilon_hat = estimate.epsilon_hat;
  });

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

}  // namespace epsaudit
