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
// Renyi local privacy budget estimation. Same histogram scheme as the
// plain-ratio estimator but with a divergence plug-in for the returned
// value and tighter plan constants derived from the density band.

#ifndef EPSAUDIT_CORE_LRDP_HPP_
#define EPSAUDIT_CORE_LRDP_HPP_

#include <cstdint>

#include "core/estimator_core.hpp"
#include "core/interval.hpp"
#include "core/ldp.hpp"
#include "core/mechanisms.hpp"

namespace epsaudit {

struct LrdpPlan {
  double alpha = 0;
  double gamma = 0;
  double delta = 0;
  double lipschitz_c = 0;
  Interval support{0, 1};
  double tau0 = 0;         // density floor 1/W - CW/2
  double tau1 = 0;         // density ceiling 1/W + CW/2
  double k_upper = 0;      // K  = 2 tau1^a / tau0^(a-1)
  double k_lower = 0;      // K' = tau0^a / tau1^(a-1)
  double gamma_prime = 0;  // per-bin log-count tolerance
  int m = 0;
  double w = 0;
  std::uint64_t n = 0;
  Guarantee guarantee = Guarantee::theoretical;
};

// Derives the full constant set and the minimal (m, n) for an order-alpha
// divergence estimate with precision gamma and confidence delta. Same
// error cases as plan_ldp. Every returned plan satisfies the two plan
// inequalities by construction (asserted by back-substitution).
LrdpPlan plan_lrdp(double alpha, double gamma, double delta, double lipschitz_c,
                   Interval support, std::uint64_t n_cap = kDefaultSampleCap);

LrdpPlan plan_lrdp_practical(double alpha, double gamma, double delta,
                             double lipschitz_c, Interval support, int m,
                             std::uint64_t n);

// Left-hand side of the sample-count inequality (success probability
// lower bound must reach delta): 1 - 2m(1-w tau0)^n - 2m f(n, w tau0, g').
double lrdp_plan_success_bound(int m, double w_tau0, double gamma_prime,
                               std::uint64_t n);

// Divergence plug-in on a counted histogram:
// (1/(alpha-1)) log sum_j (N_j/M_j)^alpha M_j/n, evaluated in log space so
// large orders cannot overflow the ratio powers. Requires no empty bins.
double renyi_plugin(const HistogramPair& histogram, double alpha);

// Larger of the two plug-in directions (p against q and q against p).
double renyi_plugin_symmetric(const HistogramPair& histogram, double alpha);

// One run of the order-alpha estimator on a fixed secret pair. argmax_bin
// is -1: the plug-in aggregates all bins rather than electing one.
PairEstimate estimate_pair_lrdp(const Mechanism& mechanism, double x1, double x2,
                                const LrdpPlan& plan, std::uint64_t seed,
                                Direction direction = Direction::symmetric);

// Bucket count for the order-alpha grid reduction:
// k >= 3(2a-1) K D (d-c) / (2(a-1) K' tau0 gamma), never below 2.
int lrdp_grid_bucket_count(double alpha, double lipschitz_c, double lipschitz_d,
                           Interval secrets, Interval support, double gamma);

// Grid estimator for the overall order-alpha budget; structure mirrors
// the plain-ratio grid (inner precision gamma/3, inner confidence
// sqrt(delta), failed pairs ignored).
GridEstimate estimate_grid_lrdp(const Mechanism& mechanism, double alpha,
                                double gamma, double delta, double lipschitz_c,
                                double lipschitz_d, Interval secrets,
                                std::uint64_t seed,
                                const GridOptions& options = {},
                                LrdpPlan* inner_plan_out = nullptr);

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_LRDP_HPP_
