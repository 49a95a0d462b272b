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
// Lipschitzness safety check. Smooth densities keep adjacent histogram
// bins close, so under an honestly claimed C the event
//   forall j: |N_j - N_{j+1}|/n <= 2c + C w^2   (and likewise for M)
// holds with probability at least 1 - 8 m exp(-n c^2 / 3). Running the
// estimator many times and comparing the empirical event frequency with
// that bound catches providers whose densities are rougher than claimed.
// The condition is necessary, not sufficient: a pass never certifies
// honesty, and a lie about C close to the truth can slip through.

#ifndef EPSAUDIT_CORE_SAFETY_HPP_
#define EPSAUDIT_CORE_SAFETY_HPP_

#include <cstdint>
#include <vector>

#include "core/estimator_core.hpp"
#include "core/mechanisms.hpp"

namespace epsaudit {

struct SafetyConfig {
  double claimed_c = 0;
  // Slack of the event inequality; 0 selects the default claimed_c*w^2/2.
  double slack_c = 0;
  // The sample count is raised until the theoretical bound reaches this.
  double required_probability = 0.9;
  int runs = 1000;
  unsigned workers = 0;
};

struct SafetyVerdict {
  std::vector<std::uint8_t> event_outcomes;  // one flag per run
  double empirical_frequency = 0;
  double theoretical_bound = 0;
  bool suspicious = false;
  // Echo of the derived run parameters.
  int m = 0;
  double w = 0;
  double slack_c = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
};

// Whether every adjacent-bin difference on both sides stays within
// 2c + C w^2. Needs at least two bins.
bool check_event(const HistogramPair& histogram, double w, double claimed_c,
                 double c);

// Guaranteed lower bound 1 - 8 m exp(-n c^2 / 3) on the event probability.
double safety_theoretical_bound(int m, std::uint64_t n, double c);

// Multi-run protocol: derive (m, w) from the claimed C via the standard
// plan, raise n until the bound reaches required_probability, run the
// event check config.runs times with child seeds, and flag the provider
// as suspicious when the empirical frequency falls more than three
// binomial standard errors below the bound.
SafetyVerdict run_safety_protocol(const Mechanism& mechanism, double x1,
                                  double x2, double gamma, double delta,
                                  const SafetyConfig& config, std::uint64_t seed);

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_SAFETY_HPP_
