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
//
// Plain-ratio local privacy budget estimation. A plan fixes the histogram
// resolution m and the sample count n from (precision, confidence,
// claimed Lipschitz constant); the pair estimator draws, counts, and
// returns the largest bin log-ratio. The grid estimator covers the whole
// secret interval by running the pair estimator on all bucket mid-points.

#ifndef EPSAUDIT_CORE_LDP_HPP_
#define EPSAUDIT_CORE_LDP_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "core/estimator_core.hpp"
#include "core/interval.hpp"
#include "core/mechanisms.hpp"

namespace epsaudit {

// Whether the plan's (m, n) carry the finite-sample guarantee or were
// overridden by hand (practical mode, no guarantee).
enum class Guarantee { theoretical, practical };

// Directed estimates bound log(p/q) only; the symmetric default takes the
// larger of both directions, matching the two-sided privacy requirement.
enum class Direction { symmetric, directed };

struct LdpPlan {
  double gamma = 0;
  double delta = 0;
  double lipschitz_c = 0;
  Interval support{0, 1};
  double tau = 0;     // 1/W - CW/2, the density floor
  int m = 0;          // bin count
  double w = 0;       // bin width W/m
  std::uint64_t n = 0;
  Guarantee guarantee = Guarantee::theoretical;
};

// Derives (m, n) for the requested precision gamma and confidence delta,
// assuming both conditional densities are C-Lipschitz on the support.
// Throws InapplicableError when C >= 2/W^2 (the message carries the
// hand-tuning hint m = ceil(100/gamma)) and InfeasibleError when no
// sample count up to the cap satisfies the confidence inequality.
LdpPlan plan_ldp(double gamma, double delta, double lipschitz_c, Interval support,
                 std::uint64_t n_cap = kDefaultSampleCap);

// Plan with caller-chosen m and n; results carry no guarantee.
LdpPlan plan_ldp_practical(double gamma, double delta, double lipschitz_c,
                           Interval support, int m, std::uint64_t n);

// Left-hand side of the plan inequality (must be <= 1 - delta).
double ldp_plan_lhs(int m, double w_tau, double gamma, std::uint64_t n);

// Largest bin log-ratio. Ratios of equal counts are exactly zero; ties
// resolve to the lowest bin index. argmax_bin may be null.
double directed_log_ratio_max(const HistogramPair& histogram, int* argmax_bin);
double symmetric_log_ratio_max(const HistogramPair& histogram, int* argmax_bin);

struct PairEstimate {
  enum class Status { succeeded, failed_empty_bin };

  Status status = Status::failed_empty_bin;
  double epsilon_hat = 0;  // meaningful iff status == succeeded
  int argmax_bin = -1;
  Direction direction = Direction::symmetric;
  std::uint64_t seed = 0;
  HistogramPair histogram;  // retained for audit and the safety check

  bool succeeded() const { return status == Status::succeeded; }
};

// One run of the histogram estimator on a fixed secret pair. An empty bin
// on either side is an in-band failure, not an exception. The two sides
// sample with child seeds 0 and 1 of `seed`.
PairEstimate estimate_pair_ldp(const Mechanism& mechanism, double x1, double x2,
                               const LdpPlan& plan, std::uint64_t seed,
                               Direction direction = Direction::symmetric);

// Bucket count for the grid reduction: k >= 3 D (d-c) / (tau gamma),
// never below 2 (one pair at minimum).
int ldp_grid_bucket_count(double lipschitz_d, Interval secrets, double tau,
                          double gamma);

std::vector<double> grid_midpoints(Interval secrets, int k);

struct GridPairOutcome {
  int i = 0;
  int j = 0;
  bool succeeded = false;
  double epsilon_hat = 0;
};

struct GridEstimate {
  bool succeeded = false;  // at least one pair run succeeded
  double epsilon_hat = 0;
  int argmax_i = -1;
  int argmax_j = -1;
  int k = 0;
  std::vector<double> midpoints;
  std::vector<GridPairOutcome> pairs;  // all k(k-1)/2 outcomes, row-major i<j
  std::uint64_t seed = 0;
};

struct GridOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  Direction direction = Direction::symmetric;
  std::optional<int> k_override;
  std::optional<int> m_override;            // practical mode
  std::optional<std::uint64_t> n_override;  // practical mode
};

// Grid estimator for the overall budget: inner pair runs use precision
// gamma/3 and confidence sqrt(delta); failed pairs are ignored unless all
// of them fail. Pair t samples with child seed t of `seed`, so the result
// does not depend on the worker count.
GridEstimate estimate_grid_ldp(const Mechanism& mechanism, double gamma,
                               double delta, double lipschitz_c,
                               double lipschitz_d, Interval secrets,
                               std::uint64_t seed, const GridOptions& options = {},
                               LdpPlan* inner_plan_out = nullptr);

// Finite-domain variant: output categories play the role of bins and the
// claimed outcome-probability floor p_min replaces w*tau in the plan.
struct DiscreteLdpPlan {
  double gamma = 0;
  double delta = 0;
  double p_min = 0;
  int m = 0;  // category count
  std::uint64_t n = 0;
  Guarantee guarantee = Guarantee::theoretical;
};

DiscreteLdpPlan plan_ldp_discrete(double gamma, double delta, double p_min,
                                  int category_count,
                                  std::uint64_t n_cap = kDefaultSampleCap);

PairEstimate estimate_discrete_ldp(const Mechanism& mechanism, double x1,
                                   double x2, const DiscreteLdpPlan& plan,
                                   std::uint64_t seed,
                                   Direction direction = Direction::symmetric);

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_LDP_HPP_
