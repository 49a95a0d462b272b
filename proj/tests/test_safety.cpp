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

#include <cmath>
#include <vector>

#include "core/interval.hpp"
#include "core/mechanisms.hpp"
#include "doctest.h"

using namespace epsaudit;

namespace {
const Interval kUnit(0.0, 1.0);

HistogramPair make_hist(std::vector<std::uint64_t> p, std::vector<std::uint64_t> q) {
  HistogramPair h;
  h.n = 0;
  for (auto v : p) h.n += v;
  h.counts_p = std::move(p);
  h.counts_q = std::move(q);
  return h;
}
}  // namespace

TEST_CASE("adjacent-bin smoothness event") {
  SUBCASE("perfectly uniform counts pass") {
    const HistogramPair h = make_hist({25, 25, 25, 25}, {25, 25, 25, 25});
    CHECK(check_event(h, 0.25, 1.0, 0.01));
  }
  SUBCASE("a point mass fails once the budget is below one") {
    const HistogramPair h = make_hist({100, 0, 0, 0}, {25, 25, 25, 25});
    CHECK_FALSE(check_event(h, 0.25, 1.0, 0.01));  // 2c + Cw^2 = 0.0825 < 1
  }
  SUBCASE("monotone in the slack") {
    const HistogramPair h = make_hist({40, 30, 20, 10}, {10, 20, 30, 40});
    bool prev = false;
    for (double c : {0.001, 0.01, 0.05, 0.2}) {
      const bool now = check_event(h, 0.25, 0.5, c);
      if (prev) CHECK(now);
      prev = now;
    }
    CHECK(prev);  // the largest slack must accept this mild histogram
  }
  SUBCASE("needs at least two bins") {
    const HistogramPair h = make_hist({10}, {10});
    CHECK_THROWS_AS(check_event(h, 1.0, 1.0, 0.01), std::invalid_argument);
  }
}

TEST_CASE("protocol on an honest mechanism") {
  TruncatedLaplace mech(1.0, kUnit);
  SafetyConfig config;
  config.claimed_c = mech.analytic_lipschitz_c();
  config.required_probability = 0.9;
  config.runs = 100;
  config.workers = 2;
  // gamma = 4 keeps the bin count small so the unit test stays quick; the
  // acceptance suite runs the full-scale protocol.
  const SafetyVerdict verdict =
      run_safety_protocol(mech, 0.0, 1.0, 4.0, 0.8, config, 313);
  CHECK(verdict.theoretical_bound >= 0.9);
  CHECK(verdict.theoretical_bound <= 1.0);
  CHECK(verdict.empirical_frequency >= verdict.theoretical_bound -
                                           3 * std::sqrt(verdict.theoretical_bound *
                                                         (1 - verdict.theoretical_bound) /
                                                         config.runs));
  CHECK_FALSE(verdict.suspicious);
  CHECK(verdict.slack_c ==
        doctest::Approx(config.claimed_c * verdict.w * verdict.w / 2.0));
}

TEST_CASE("protocol flags a provider that understates C") {
  TruncatedLaplace rough(0.5, kUnit);  // true C near 4.63
  SafetyConfig config;
  config.claimed_c = 1.0;
  config.required_probability = 0.9;
  config.runs = 200;
  config.workers = 2;
  const SafetyVerdict verdict =
      run_safety_protocol(rough, 0.0, 1.0, 2.0, 0.8, config, 99);
  CHECK(verdict.suspicious);
  CHECK(verdict.empirical_frequency < verdict.theoretical_bound - 0.5);
}

TEST_CASE("a lie close to the truth slips through (documented blind spot)") {
  TruncatedLaplace mech(1.0, kUnit);  // true C near 1.58
  SafetyConfig config;
  config.claimed_c = 1.5;
  config.required_probability = 0.9;
  config.runs = 50;
  config.workers = 2;
  const SafetyVerdict verdict =
      run_safety_protocol(mech, 0.0, 1.0, 4.0, 0.8, config, 17);
  CHECK_FALSE(verdict.suspicious);
}

TEST_CASE("verdicts are deterministic and worker-independent") {
  TruncatedLaplace mech(1.0, kUnit);
  SafetyConfig config;
  config.claimed_c = mech.analytic_lipschitz_c();
  config.required_probability = 0.8;
  config.runs = 10;
  config.workers = 1;
  const SafetyVerdict a = run_safety_protocol(mech, 0.0, 1.0, 6.0, 0.8, config, 5);
  config.workers = 2;
  const SafetyVerdict b = run_safety_protocol(mech, 0.0, 1.0, 6.0, 0.8, config, 5);
  CHECK(a.event_outcomes == b.event_outcomes);
  CHECK(a.empirical_frequency == b.empirical_frequency);
  CHECK(a.n == b.n);
}

TEST_CASE("configuration validation") {
  TruncatedLaplace mech(1.0, kUnit);
  SafetyConfig config;
  config.claimed_c = 1.58;
  config.runs = 0;
  CHECK_THROWS_AS(run_safety_protocol(mech, 0.0, 1.0, 2.0, 0.8, config, 1),
                  std::invalid_argument);
  config.runs = 10;
  config.required_probability = 1.0;
  CHECK_THROWS_AS(run_safety_protocol(mech, 0.0, 1.0, 2.0, 0.8, config, 1),
                  std::invalid_argument);
  // A claimed C of zero plans a single bin: the check does not apply.
  config.required_probability = 0.9;
  config.claimed_c = 0.0;
  CHECK_THROWS_AS(run_safety_protocol(mech, 0.0, 1.0, 2.0, 0.8, config, 1),
                  std::invalid_argument);
}
