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

#include "core/safety.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/ldp.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace epsaudit {

bool check_event(const HistogramPair& histogram, double w, double claimed_c,
                 double c) {
  const std::size_t m = histogram.counts_p.size();
  if (m < 2) {
    throw std::invalid_argument(
        "the smoothness event needs at least two bins to compare");
  }
  if (!(c > 0)) throw std::invalid_argument("slack c must be positive");
  const double budget = 2.0 * c + claimed_c * w * w;
  const double n = static_cast<double>(histogram.n);
  for (std::size_t j = 0; j + 1 < m; ++j) {
    const auto diff_p = histogram.counts_p[j] > histogram.counts_p[j + 1]
                            ? histogram.counts_p[j] - histogram.counts_p[j + 1]
                            : histogram.counts_p[j + 1] - histogram.counts_p[j];
    const auto diff_q = histogram.counts_q[j] > histogram.counts_q[j + 1]
                            ? histogram.counts_q[j] - histogram.counts_q[j + 1]
                            : histogram.counts_q[j + 1] - histogram.counts_q[j];
    if (static_cast<double>(diff_p) / n > budget ||
        static_cast<double>(diff_q) / n > budget) {
      return false;
    }
  }
  return true;
}

double safety_theoretical_bound(int m, std::uint64_t n, double c) {
  return 1.0 - 8.0 * m * std::exp(-static_cast<double>(n) * c * c / 3.0);
}

SafetyVerdict run_safety_protocol(const Mechanism& mechanism, double x1,
                                  double x2, double gamma, double delta,
                                  const SafetyConfig& config, std::uint64_t seed) {
  if (config.runs < 1) throw std::invalid_argument("need at least one run");
  if (!(config.required_probability > 0) || !(config.required_probability < 1)) {
    throw std::invalid_argument("required probability must lie in (0,1)");
  }

  // The event parameters come from the ordinary plan for the claimed C.
  const LdpPlan plan =
      plan_ldp(gamma, delta, config.claimed_c, mechanism.output_interval());
  if (plan.m < 2) {
    throw std::invalid_argument(
        "the claimed C yields a single-bin plan; the smoothness check does not apply");
  }
  const double c = config.slack_c > 0
                       ? config.slack_c
                       : config.claimed_c * plan.w * plan.w / 2.0;
  if (!(c > 0)) {
    throw std::invalid_argument("slack c must be positive (claimed C = 0 needs an explicit slack)");
  }

  // Raise n until the guaranteed lower bound meets the required level:
  // 8 m exp(-n c^2/3) <= 1 - required  =>  n >= 3 ln(8m/(1-required))/c^2.
  const double needed = 3.0 *
                        std::log(8.0 * plan.m / (1.0 - config.required_probability)) /
                        (c * c);
  std::uint64_t n = plan.n;
  if (needed > static_cast<double>(n)) {
    n = static_cast<std::uint64_t>(std::ceil(needed));
  }

  SafetyVerdict verdict;
  verdict.m = plan.m;
  verdict.w = plan.w;
  verdict.slack_c = c;
  verdict.n = n;
  verdict.seed = seed;
  verdict.theoretical_bound = safety_theoretical_bound(plan.m, n, c);
  verdict.event_outcomes.assign(config.runs, 0);

  const BinGrid grid(plan.support, plan.m);
  parallel_for(static_cast<std::size_t>(config.runs), config.workers,
               [&](std::size_t run) {
                 const std::uint64_t run_seed = child_seed(seed, run);
                 HistogramPair hist;
                 hist.n = n;
                 hist.counts_p = sampled_bin_counts(mechanism, x1, n,
                                                    child_seed(run_seed, 0), grid);
                 hist.counts_q = sampled_bin_counts(mechanism, x2, n,
                                                    child_seed(run_seed, 1), grid);
                 verdict.event_outcomes[run] =
                     check_event(hist, plan.w, config.claimed_c, c) ? 1 : 0;
               });

  std::uint64_t hits = 0;
  for (std::uint8_t outcome : verdict.event_outcomes) hits += outcome;
  verdict.empirical_frequency = static_cast<double>(hits) / config.runs;

  // "Significantly lower" quantified as three binomial standard errors at
  // `runs` trials below the bound.
  const double bound = verdict.theoretical_bound;
  const double stderr3 =
      3.0 * std::sqrt(std::max(bound * (1.0 - bound), 0.0) / config.runs);
  verdict.suspicious = verdict.empirical_frequency < bound - stderr3;
  return verdict;
}

}  // namespace epsaudit
