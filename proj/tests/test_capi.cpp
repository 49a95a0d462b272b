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
// Exercises the shared-library C surface end to end: handles, status
// codes, plan PODs, estimation, safety, oracle.

#include "epsaudit.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"

namespace {

struct MechanismHandle {
  epsaudit_mechanism* ptr = nullptr;
  ~MechanismHandle() { epsaudit_mechanism_free(ptr); }
};

}  // namespace

TEST_CASE("mechanism lifecycle and queries") {
  MechanismHandle lap;
  REQUIRE(epsaudit_trunc_laplace_create(1.0, 0.0, 1.0, &lap.ptr) == EPSAUDIT_OK);
  CHECK(epsaudit_mechanism_is_discrete(lap.ptr) == 0);

  double lo = 0, hi = 0;
  CHECK(epsaudit_mechanism_output_interval(lap.ptr, &lo, &hi) == EPSAUDIT_OK);
  CHECK(lo == 0.0);
  CHECK(hi == 1.0);

  double f = 0;
  CHECK(epsaudit_mechanism_density(lap.ptr, 0.0, 0.0, &f) == EPSAUDIT_OK);
  CHECK(f == doctest::Approx(1.5819767).epsilon(1e-6));

  CHECK(epsaudit_mechanism_density(lap.ptr, 2.0, 0.0, &f) == EPSAUDIT_ERROR_DOMAIN);
  CHECK(std::string(epsaudit_last_error()).size() > 0);

  MechanismHandle krr;
  REQUIRE(epsaudit_krr_create(4, 1.0, &krr.ptr) == EPSAUDIT_OK);
  CHECK(epsaudit_mechanism_is_discrete(krr.ptr) == 1);
  int k = 0;
  CHECK(epsaudit_mechanism_category_count(krr.ptr, &k) == EPSAUDIT_OK);
  CHECK(k == 4);
  CHECK(epsaudit_mechanism_category_count(lap.ptr, &k) ==
        EPSAUDIT_ERROR_INVALID_ARGUMENT);

  CHECK(epsaudit_trunc_laplace_create(-1.0, 0.0, 1.0, &lap.ptr) ==
        EPSAUDIT_ERROR_INVALID_ARGUMENT);
  CHECK(epsaudit_trunc_laplace_create(1.0, 1.0, 0.0, &lap.ptr) ==
        EPSAUDIT_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("sampling through the C surface is deterministic") {
  MechanismHandle mech;
  REQUIRE(epsaudit_trunc_gaussian_create(0.5, 0.0, 1.0, &mech.ptr) == EPSAUDIT_OK);
  std::vector<double> a(1000), b(1000);
  REQUIRE(epsaudit_mechanism_sample(mech.ptr, 0.25, 1000, 7, a.data()) == EPSAUDIT_OK);
  REQUIRE(epsaudit_mechanism_sample(mech.ptr, 0.25, 1000, 7, b.data()) == EPSAUDIT_OK);
  CHECK(std::memcmp(a.data(), b.data(), 1000 * sizeof(double)) == 0);
  CHECK(epsaudit_child_seed(1, 0) != epsaudit_child_seed(1, 1));
  CHECK(epsaudit_child_seed(1, 0) == epsaudit_child_seed(1, 0));
}

TEST_CASE("plans through the C surface") {
  epsaudit_ldp_plan plan{};
  REQUIRE(epsaudit_plan_ldp(1.0, 0.8, 0.63, 0.0, 1.0, &plan) == EPSAUDIT_OK);
  CHECK(plan.m == 6);
  CHECK(std::llabs(static_cast<long long>(plan.n) - 9588) <= 96);
  CHECK(plan.theoretical == 1);

  CHECK(epsaudit_plan_ldp(1.0, 0.8, 4.62, 0.0, 1.0, &plan) ==
        EPSAUDIT_ERROR_INAPPLICABLE);
  CHECK(epsaudit_plan_ldp(1e-3, 0.999, 1.9, 0.0, 1.0, &plan) ==
        EPSAUDIT_ERROR_INFEASIBLE);

  epsaudit_lrdp_plan rplan{};
  REQUIRE(epsaudit_plan_lrdp(2.0, 0.5, 0.9, 0.3285, 0.0, 1.0, &rplan) == EPSAUDIT_OK);
  CHECK(rplan.m == 13);
  CHECK(rplan.tau0 == doctest::Approx(1.0 - 0.3285 / 2));

  int32_t k = 0;
  REQUIRE(epsaudit_ldp_grid_k(3.16, 0.0, 1.0, 0.21, 0.5, &k) == EPSAUDIT_OK);
  CHECK(k == 91);
  REQUIRE(epsaudit_lrdp_grid_k(2.0, 0.33, 0.66, 0.0, 1.0, 0.0, 1.0, 0.5, &k) ==
          EPSAUDIT_OK);
  CHECK(k == 39);
}

TEST_CASE("pair estimation through the C surface") {
  MechanismHandle mech;
  REQUIRE(epsaudit_trunc_laplace_create(1.0, 0.0, 1.0, &mech.ptr) == EPSAUDIT_OK);
  epsaudit_ldp_plan plan{};
  REQUIRE(epsaudit_plan_ldp_practical(0.5, 0.8, 1.58, 0.0, 1.0, 91, 4000, &plan) ==
          EPSAUDIT_OK);
  CHECK(plan.theoretical == 0);

  epsaudit_pair_result result{};
  std::vector<uint64_t> counts_p(plan.m), counts_q(plan.m);
  REQUIRE(epsaudit_estimate_ldp_pair(mech.ptr, 0.0, 1.0, &plan, 42, 0, &result,
                                     counts_p.data(), counts_q.data()) ==
          EPSAUDIT_OK);
  REQUIRE(result.succeeded == 1);
  CHECK(std::abs(result.epsilon_hat - 1.0) <= 0.6);
  uint64_t total = 0;
  for (uint64_t c : counts_p) total += c;
  CHECK(total == plan.n);

  // Same seed, same estimate.
  epsaudit_pair_result again{};
  REQUIRE(epsaudit_estimate_ldp_pair(mech.ptr, 0.0, 1.0, &plan, 42, 0, &again,
                                     nullptr, nullptr) == EPSAUDIT_OK);
  CHECK(again.epsilon_hat == result.epsilon_hat);
}

TEST_CASE("grid estimation through the C surface") {
  MechanismHandle mech;
  REQUIRE(epsaudit_trunc_laplace_create(1.0, 0.0, 1.0, &mech.ptr) == EPSAUDIT_OK);
  epsaudit_grid_options options{};
  options.k_override = 6;
  options.m_override = 12;
  options.n_override = 3000;
  options.workers = 2;
  epsaudit_grid_result result{};
  epsaudit_ldp_plan inner{};
  std::vector<double> pair_eps(6 * 5 / 2);
  std::vector<int32_t> pair_ok(6 * 5 / 2);
  REQUIRE(epsaudit_estimate_ldp_grid(mech.ptr, 0.5, 0.8, 1.58, 3.16, 0.0, 1.0, 9,
                                     &options, &result, &inner, pair_eps.data(),
                                     pair_ok.data()) == EPSAUDIT_OK);
  CHECK(result.k == 6);
  CHECK(result.pair_count == 15);
  CHECK(result.succeeded == 1);
  CHECK(inner.theoretical == 0);
  CHECK(result.epsilon_hat > 0.2);
  bool found_argmax = false;
  for (std::size_t t = 0; t < pair_eps.size(); ++t) {
    if (pair_ok[t] != 0 && pair_eps[t] == result.epsilon_hat) found_argmax = true;
  }
  CHECK(found_argmax);
}

TEST_CASE("discrete estimation through the C surface") {
  MechanismHandle krr;
  REQUIRE(epsaudit_krr_create(2, 1.0, &krr.ptr) == EPSAUDIT_OK);
  epsaudit_discrete_plan plan{};
  const double p_min = 1.0 / (std::exp(1.0) + 1.0);
  REQUIRE(epsaudit_plan_ldp_discrete(0.3, 0.8, p_min, 2, &plan) == EPSAUDIT_OK);
  CHECK(plan.m == 2);
  epsaudit_pair_result result{};
  REQUIRE(epsaudit_estimate_ldp_discrete(krr.ptr, 0.0, 1.0, &plan, 0, 21, 0,
                                         &result, nullptr, nullptr) == EPSAUDIT_OK);
  REQUIRE(result.succeeded == 1);
  CHECK(std::abs(result.epsilon_hat - 1.0) <= 0.3);

  // Fixed-budget override used by the impossibility demonstration.
  MechanismHandle adv;
  REQUIRE(epsaudit_adversarial_bernoulli_create(
              1e-6, 1000.0, std::numeric_limits<double>::infinity(), &adv.ptr) ==
          EPSAUDIT_OK);
  epsaudit_pair_result demo{};
  REQUIRE(epsaudit_estimate_ldp_discrete(adv.ptr, 0.0, 1.0, &plan, 1000, 3, 0,
                                         &demo, nullptr, nullptr) == EPSAUDIT_OK);
  CHECK((demo.succeeded == 0 || demo.epsilon_hat < std::log(1000.0) - 1.0));
}

TEST_CASE("renyi estimation through the C surface") {
  MechanismHandle mech;
  REQUIRE(epsaudit_trunc_laplace_create(3.5, 0.0, 1.0, &mech.ptr) == EPSAUDIT_OK);
  double c = 0, eps = 0;
  REQUIRE(epsaudit_trunc_laplace_constants(3.5, 0.0, 1.0, &c, &eps) == EPSAUDIT_OK);
  CHECK(c == doctest::Approx(0.3285).epsilon(1e-3));
  epsaudit_lrdp_plan plan{};
  REQUIRE(epsaudit_plan_lrdp_practical(2.0, 0.5, 0.9, c, 0.0, 1.0, 13, 200000,
                                       &plan) == EPSAUDIT_OK);
  epsaudit_pair_result result{};
  REQUIRE(epsaudit_estimate_lrdp_pair(mech.ptr, 0.0, 1.0, &plan, 5, 0, &result,
                                      nullptr, nullptr) == EPSAUDIT_OK);
  REQUIRE(result.succeeded == 1);
  epsaudit_oracle_result truth{};
  REQUIRE(epsaudit_oracle_renyi(mech.ptr, 0.0, 1.0, 2.0, &truth) == EPSAUDIT_OK);
  CHECK(std::abs(result.epsilon_hat - truth.value) <= 0.02);
}

TEST_CASE("safety protocol through the C surface") {
  MechanismHandle rough;
  REQUIRE(epsaudit_trunc_laplace_create(0.5, 0.0, 1.0, &rough.ptr) == EPSAUDIT_OK);
  epsaudit_safety_config config{};
  config.claimed_c = 1.0;
  config.required_probability = 0.9;
  config.gamma = 2.0;
  config.delta = 0.8;
  config.runs = 100;
  config.workers = 2;
  epsaudit_safety_verdict verdict{};
  std::vector<uint8_t> flags(config.runs);
  REQUIRE(epsaudit_run_safety(rough.ptr, 0.0, 1.0, &config, 1, &verdict,
                              flags.data()) == EPSAUDIT_OK);
  CHECK(verdict.suspicious == 1);
  int hits = 0;
  for (uint8_t f : flags) hits += f;
  CHECK(hits == doctest::Approx(verdict.empirical_frequency * config.runs));
}

TEST_CASE("oracle through the C surface") {
  MechanismHandle lap;
  REQUIRE(epsaudit_trunc_laplace_create(2.0, 0.0, 1.0, &lap.ptr) == EPSAUDIT_OK);
  epsaudit_oracle_result r{};
  REQUIRE(epsaudit_oracle_eps_pair(lap.ptr, 0.0, 1.0, &r) == EPSAUDIT_OK);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.method == EPSAUDIT_ORACLE_CLOSED_FORM);
  REQUIRE(epsaudit_oracle_eps_global(lap.ptr, 0.0, 1.0, &r) == EPSAUDIT_OK);
  CHECK(r.value == doctest::Approx(0.5).epsilon(1e-9));

  MechanismHandle krr;
  REQUIRE(epsaudit_krr_create(2, 1.0, &krr.ptr) == EPSAUDIT_OK);
  REQUIRE(epsaudit_oracle_eps_discrete(krr.ptr, 0.0, 1.0, &r) == EPSAUDIT_OK);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(epsaudit_oracle_renyi_discrete(krr.ptr, 0.0, 1.0, 2.0, &r) == EPSAUDIT_OK);
  CHECK(r.value <= 1.0);
  CHECK(r.value > 0.0);

  CHECK(epsaudit_oracle_eps_pair(nullptr, 0.0, 1.0, &r) ==
        EPSAUDIT_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("version and status names") {
  CHECK(std::string(epsaudit_version()).size() > 0);
  CHECK(std::string(epsaudit_status_name(EPSAUDIT_OK)) == "ok");
  CHECK(std::string(epsaudit_status_name(EPSAUDIT_ERROR_INFEASIBLE)) ==
        "infeasible plan");
}
