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
// extern "C" surface of the shared library: opaque mechanism handles,
// status codes, POD plan/result structs. Exceptions from the core are
// caught at this boundary and mapped to statuses; the message lands in a
// thread-local buffer readable via epsaudit_last_error().

#include "epsaudit.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "core/errors.hpp"
#include "core/estimator_core.hpp"
#include "core/interval.hpp"
#include "core/ldp.hpp"
#include "core/lrdp.hpp"
#include "core/mechanisms.hpp"
#include "core/oracle.hpp"
#include "core/rng.hpp"
#include "core/safety.hpp"

struct epsaudit_mechanism {
  std::unique_ptr<epsaudit::Mechanism> impl;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* what) { g_last_error = what != nullptr ? what : ""; }

template <typename Fn>
epsaudit_status guarded(Fn&& fn) {
  try {
    fn();
    return EPSAUDIT_OK;
  } catch (const epsaudit::InapplicableError& e) {
    set_error(e.what());
    return EPSAUDIT_ERROR_INAPPLICABLE;
  } catch (const epsaudit::InfeasibleError& e) {
    set_error(e.what());
    return EPSAUDIT_ERROR_INFEASIBLE;
  } catch (const std::domain_error& e) {
    set_error(e.what());
    return EPSAUDIT_ERROR_DOMAIN;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return EPSAUDIT_ERROR_INVALID_ARGUMENT;
  } catch (const std::logic_error& e) {
    set_error(e.what());
    return EPSAUDIT_ERROR_INVALID_ARGUMENT;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return EPSAUDIT_ERROR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return EPSAUDIT_ERROR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return EPSAUDIT_ERROR_INTERNAL;
  }
}

epsaudit_status require(bool condition, const char* message) {
  if (condition) return EPSAUDIT_OK;
  set_error(message);
  return EPSAUDIT_ERROR_INVALID_ARGUMENT;
}

template <typename Factory>
epsaudit_status create_mechanism(epsaudit_mechanism** out, Factory&& make) {
  epsaudit_status pre = require(out != nullptr, "null output handle");
  if (pre != EPSAUDIT_OK) return pre;
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<epsaudit_mechanism>();
    handle->impl = make();
    *out = handle.release();
  });
}

epsaudit::LdpPlan to_core(const epsaudit_ldp_plan& plan) {
  epsaudit::LdpPlan core;
  core.gamma = plan.gamma;
  core.delta = plan.delta;
  core.lipschitz_c = plan.lipschitz_c;
  core.support = epsaudit::Interval(plan.z_lo, plan.z_hi);
  core.tau = plan.tau;
  core.m = plan.m;
  core.w = plan.w;
  core.n = plan.n;
  core.guarantee = plan.theoretical != 0 ? epsaudit::Guarantee::theoretical
                                         : epsaudit::Guarantee::practical;
  return core;
}

epsaudit_ldp_plan from_core(const epsaudit::LdpPlan& core) {
  epsaudit_ldp_plan plan{};
  plan.gamma = core.gamma;
  plan.delta = core.delta;
  plan.lipschitz_c = core.lipschitz_c;
  plan.z_lo = core.support.lo;
  plan.z_hi = core.support.hi;
  plan.tau = core.tau;
  plan.w = core.w;
  plan.m = core.m;
  plan.n = core.n;
  plan.theoretical = core.guarantee == epsaudit::Guarantee::theoretical ? 1 : 0;
  return plan;
}

epsaudit::LrdpPlan to_core(const epsaudit_lrdp_plan& plan) {
  epsaudit::LrdpPlan core;
  core.alpha = plan.alpha;
  core.gamma = plan.gamma;
  core.delta = plan.delta;
  core.lipschitz_c = plan.lipschitz_c;
  core.support = epsaudit::Interval(plan.z_lo, plan.z_hi);
  core.tau0 = plan.tau0;
  core.tau1 = plan.tau1;
  core.k_upper = plan.k_upper;
  core.k_lower = plan.k_lower;
  core.gamma_prime = plan.gamma_prime;
  core.m = plan.m;
  core.w = plan.w;
  core.n = plan.n;
  core.guarantee = plan.theoretical != 0 ? epsaudit::Guarantee::theoretical
                                         : epsaudit::Guarantee::practical;
  return core;
}

epsaudit_lrdp_plan from_core(const epsaudit::LrdpPlan& core) {
  epsaudit_lrdp_plan plan{};
  plan.alpha = core.alpha;
  plan.gamma = core.gamma;
  plan.delta = core.delta;
  plan.lipschitz_c = core.lipschitz_c;
  plan.z_lo = core.support.lo;
  plan.z_hi = core.support.hi;
  plan.tau0 = core.tau0;
  plan.tau1 = core.tau1;
  plan.k_upper = core.k_upper;
  plan.k_lower = core.k_lower;
  plan.gamma_prime = core.gamma_prime;
  plan.w = core.w;
  plan.m = core.m;
  plan.n = core.n;
  plan.theoretical = core.guarantee == epsaudit::Guarantee::theoretical ? 1 : 0;
  return plan;
}

void fill_pair_result(const epsaudit::PairEstimate& estimate,
                      epsaudit_pair_result* out, uint64_t* counts_p,
                      uint64_t* counts_q) {
  out->succeeded = estimate.succeeded() ? 1 : 0;
  out->epsilon_hat = estimate.epsilon_hat;
  out->argmax_bin = estimate.argmax_bin;
  out->seed = estimate.seed;
  if (counts_p != nullptr) {
    std::memcpy(counts_p, estimate.histogram.counts_p.data(),
                estimate.histogram.counts_p.size() * sizeof(uint64_t));
  }
  if (counts_q != nullptr) {
    std::memcpy(counts_q, estimate.histogram.counts_q.data(),
                estimate.histogram.counts_q.size() * sizeof(uint64_t));
  }
}

epsaudit::GridOptions to_core(const epsaudit_grid_options* options) {
  epsaudit::GridOptions core;
  if (options == nullptr) return core;
  core.workers = options->workers > 0 ? static_cast<unsigned>(options->workers) : 0;
  core.direction = options->directed != 0 ? epsaudit::Direction::directed
                                          : epsaudit::Direction::symmetric;
  if (options->k_override > 0) core.k_override = options->k_override;
  if (options->m_override > 0) core.m_override = options->m_override;
  if (options->n_override > 0) core.n_override = options->n_override;
  return core;
}

void fill_grid_result(const epsaudit::GridEstimate& grid,
                      epsaudit_grid_result* out, double* pair_eps,
                      int32_t* pair_ok) {
  out->succeeded = grid.succeeded ? 1 : 0;
  out->epsilon_hat = grid.epsilon_hat;
  out->argmax_i = grid.argmax_i;
  out->argmax_j = grid.argmax_j;
  out->k = grid.k;
  out->pair_count = grid.pairs.size();
  for (std::size_t t = 0; t < grid.pairs.size(); ++t) {
    if (pair_eps != nullptr) {
      pair_eps[t] = grid.pairs[t].succeeded ? grid.pairs[t].epsilon_hat
                                            : std::nan("");
    }
    if (pair_ok != nullptr) pair_ok[t] = grid.pairs[t].succeeded ? 1 : 0;
  }
}

epsaudit_oracle_result from_core(const epsaudit::oracle::Result& core) {
  epsaudit_oracle_result out{};
  out.value = core.value;
  out.method = static_cast<int32_t>(core.method);
  out.resolution = core.resolution;
  return out;
}

// Probability vectors of a discrete mechanism side.
std::vector<double> mass_vector(const epsaudit::Mechanism& mech, double x) {
  const int k = mech.category_count();
  std::vector<double> mass(k);
  for (int z = 0; z < k; ++z) mass[z] = mech.category_mass(z, x);
  return mass;
}

}  // namespace

extern "C" {

const char* epsaudit_status_name(epsaudit_status status) {
  switch (status) {
    case EPSAUDIT_OK: return "ok";
    case EPSAUDIT_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case EPSAUDIT_ERROR_DOMAIN: return "domain error";
    case EPSAUDIT_ERROR_INAPPLICABLE: return "theorem inapplicable";
    case EPSAUDIT_ERROR_INFEASIBLE: return "infeasible plan";
    case EPSAUDIT_ERROR_ESTIMATION_FAILED: return "estimation failed";
    case EPSAUDIT_ERROR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* epsaudit_last_error(void) { return g_last_error.c_str(); }

const char* epsaudit_version(void) { return "0.1.0"; }

uint64_t epsaudit_child_seed(uint64_t root, uint64_t index) {
  return epsaudit::child_seed(root, index);
}

epsaudit_status epsaudit_trunc_laplace_create(double scale, double lo, double hi,
                                              epsaudit_mechanism** out) {
  return create_mechanism(out, [&] {
    return std::make_unique<epsaudit::TruncatedLaplace>(scale,
                                                        epsaudit::Interval(lo, hi));
  });
}

epsaudit_status epsaudit_trunc_gaussian_create(double sigma, double lo, double hi,
                                               epsaudit_mechanism** out) {
  return create_mechanism(out, [&] {
    return std::make_unique<epsaudit::TruncatedGaussian>(sigma,
                                                         epsaudit::Interval(lo, hi));
  });
}

epsaudit_status epsaudit_krr_create(int categories, double epsilon,
                                    epsaudit_mechanism** out) {
  return create_mechanism(out, [&] {
    return std::make_unique<epsaudit::KRandomizedResponse>(categories, epsilon);
  });
}

epsaudit_status epsaudit_adversarial_bernoulli_create(double d, double h,
                                                      double alpha,
                                                      epsaudit_mechanism** out) {
  const double order = std::isfinite(alpha)
                           ? alpha
                           : std::numeric_limits<double>::infinity();
  return create_mechanism(out, [&] {
    return std::make_unique<epsaudit::AdversarialBernoulliPair>(d, h, order);
  });
}

void epsaudit_mechanism_free(epsaudit_mechanism* mechanism) { delete mechanism; }

int epsaudit_mechanism_is_discrete(const epsaudit_mechanism* mechanism) {
  return mechanism != nullptr && mechanism->impl->is_discrete() ? 1 : 0;
}

epsaudit_status epsaudit_mechanism_output_interval(
    const epsaudit_mechanism* mechanism, double* lo, double* hi) {
  epsaudit_status pre = require(mechanism != nullptr && lo != nullptr && hi != nullptr,
                                "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const epsaudit::Interval iv = mechanism->impl->output_interval();
    *lo = iv.lo;
    *hi = iv.hi;
  });
}

epsaudit_status epsaudit_mechanism_category_count(
    const epsaudit_mechanism* mechanism, int* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] { *out = mechanism->impl->category_count(); });
}

epsaudit_status epsaudit_mechanism_density(const epsaudit_mechanism* mechanism,
                                           double z, double x, double* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] { *out = mechanism->impl->density(z, x); });
}

epsaudit_status epsaudit_mechanism_category_mass(
    const epsaudit_mechanism* mechanism, int z, double x, double* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] { *out = mechanism->impl->category_mass(z, x); });
}

epsaudit_status epsaudit_mechanism_sample(const epsaudit_mechanism* mechanism,
                                          double x, uint64_t n, uint64_t seed,
                                          double* out) {
  epsaudit_status pre = require(mechanism != nullptr && (out != nullptr || n == 0),
                                "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    mechanism->impl->sample(x, static_cast<std::size_t>(n), seed,
                            std::span<double>(out, static_cast<std::size_t>(n)));
  });
}

epsaudit_status epsaudit_mechanism_lipschitz(const epsaudit_mechanism* mechanism,
                                             double* c, double* d,
                                             int* applicable) {
  epsaudit_status pre =
      require(mechanism != nullptr && c != nullptr && d != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const epsaudit::LipschitzConstants k =
        epsaudit::measure_lipschitz_constants(*mechanism->impl);
    *c = k.c;
    *d = k.d;
    if (applicable != nullptr) *applicable = k.theorem_applicable ? 1 : 0;
  });
}

epsaudit_status epsaudit_trunc_laplace_constants(double scale, double lo,
                                                 double hi, double* c,
                                                 double* epsilon) {
  epsaudit_status pre = require(c != nullptr && epsilon != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const epsaudit::TruncatedLaplace mech(scale, epsaudit::Interval(lo, hi));
    *c = mech.analytic_lipschitz_c();
    *epsilon = mech.analytic_epsilon();
  });
}

epsaudit_status epsaudit_plan_ldp(double gamma, double delta, double lipschitz_c,
                                  double z_lo, double z_hi,
                                  epsaudit_ldp_plan* out) {
  epsaudit_status pre = require(out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = from_core(epsaudit::plan_ldp(gamma, delta, lipschitz_c,
                                        epsaudit::Interval(z_lo, z_hi)));
  });
}

epsaudit_status epsaudit_plan_ldp_practical(double gamma, double delta,
                                            double lipschitz_c, double z_lo,
                                            double z_hi, int32_t m, uint64_t n,
                                            epsaudit_ldp_plan* out) {
  epsaudit_status pre = require(out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = from_core(epsaudit::plan_ldp_practical(
        gamma, delta, lipschitz_c, epsaudit::Interval(z_lo, z_hi), m, n));
  });
}

epsaudit_status epsaudit_estimate_ldp_pair(const epsaudit_mechanism* mechanism,
                                           double x1, double x2,
                                           const epsaudit_ldp_plan* plan,
                                           uint64_t seed, int directed,
                                           epsaudit_pair_result* out,
                                           uint64_t* counts_p,
                                           uint64_t* counts_q) {
  epsaudit_status pre = require(
      mechanism != nullptr && plan != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const epsaudit::PairEstimate estimate = epsaudit::estimate_pair_ldp(
        *mechanism->impl, x1, x2, to_core(*plan), seed,
        directed != 0 ? epsaudit::Direction::directed
                      : epsaudit::Direction::symmetric);
    fill_pair_result(estimate, out, counts_p, counts_q);
  });
}

epsaudit_status epsaudit_ldp_grid_k(double lipschitz_d, double x_lo, double x_hi,
                                    double tau, double gamma, int32_t* out) {
  epsaudit_status pre = require(out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = epsaudit::ldp_grid_bucket_count(
        lipschitz_d, epsaudit::Interval(x_lo, x_hi), tau, gamma);
  });
}

epsaudit_status epsaudit_estimate_ldp_grid(
    const epsaudit_mechanism* mechanism, double gamma, double delta,
    double lipschitz_c, double lipschitz_d, double x_lo, double x_hi,
    uint64_t seed, const epsaudit_grid_options* options, epsaudit_grid_result* out,
    epsaudit_ldp_plan* inner_plan, double* pair_eps, int32_t* pair_ok) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    epsaudit::LdpPlan core_inner;
    const epsaudit::GridEstimate grid = epsaudit::estimate_grid_ldp(
        *mechanism->impl, gamma, delta, lipschitz_c, lipschitz_d,
        epsaudit::Interval(x_lo, x_hi), seed, to_core(options), &core_inner);
    fill_grid_result(grid, out, pair_eps, pair_ok);
    if (inner_plan != nullptr) *inner_plan = from_core(core_inner);
  });
}

epsaudit_status epsaudit_plan_ldp_discrete(double gamma, double delta,
                                           double p_min, int32_t categories,
                                           epsaudit_discrete_plan* out) {
  epsaudit_status pre = require(out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const epsaudit::DiscreteLdpPlan plan =
        epsaudit::plan_ldp_discrete(gamma, delta, p_min, categories);
    out->gamma = plan.gamma;
    out->delta = plan.delta;
    out->p_min = plan.p_min;
    out->m = plan.m;
    out->n = plan.n;
    out->theoretical = plan.guarantee == epsaudit::Guarantee::theoretical ? 1 : 0;
  });
}

epsaudit_status epsaudit_estimate_ldp_discrete(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    const epsaudit_discrete_plan* plan, uint64_t n_override, uint64_t seed,
    int directed, epsaudit_pair_result* out, uint64_t* counts_p,
    uint64_t* counts_q) {
  epsaudit_status pre = require(
      mechanism != nullptr && plan != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    epsaudit::DiscreteLdpPlan core;
    core.gamma = plan->gamma;
    core.delta = plan->delta;
    core.p_min = plan->p_min;
    core.m = plan->m;
    core.n = plan->n;
    core.guarantee = plan->theoretical != 0 ? epsaudit::Guarantee::theoretical
                                            : epsaudit::Guarantee::practical;
    if (n_override > 0) {
      core.n = n_override;
      core.guarantee = epsaudit::Guarantee::practical;
    }
    const epsaudit::PairEstimate estimate = epsaudit::estimate_discrete_ldp(
        *mechanism->impl, x1, x2, core, seed,
        directed != 0 ? epsaudit::Direction::directed
                      : epsaudit::Direction::symmetric);
    fill_pair_result(estimate, out, counts_p, counts_q);
  });
}

epsaudit_status epsaudit_plan_lrdp(double alpha, double gamma, double delta,
                                   double lipschitz_c, double z_lo, double z_hi,
                                   epsaudit_lrdp_plan* out) {
  epsaudit_status pre = require(out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = from_core(epsaudit::plan_lrdp(alpha, gamma, delta, lipschitz_c,
                                         epsaudit::Interval(z_lo, z_hi)));
  });
}

epsaudit_status epsaudit_plan_lrdp_practical(double alpha, double gamma,
                                             double delta, double lipschitz_c,
                                             double z_lo, double z_hi, int32_t m,
                                             uint64_t n, epsaudit_lrdp_plan* out) {
  epsaudit_status pre = require(out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = from_core(epsaudit::plan_lrdp_practical(
        alpha, gamma, delta, lipschitz_c, epsaudit::Interval(z_lo, z_hi), m, n));
  });
}

epsaudit_status epsaudit_estimate_lrdp_pair(const epsaudit_mechanism* mechanism,
                                            double x1, double x2,
                                            const epsaudit_lrdp_plan* plan,
                                            uint64_t seed, int directed,
                                            epsaudit_pair_result* out,
                                            uint64_t* counts_p,
                                            uint64_t* counts_q) {
  epsaudit_status pre = require(
      mechanism != nullptr && plan != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const epsaudit::PairEstimate estimate = epsaudit::estimate_pair_lrdp(
        *mechanism->impl, x1, x2, to_core(*plan), seed,
        directed != 0 ? epsaudit::Direction::directed
                      : epsaudit::Direction::symmetric);
    fill_pair_result(estimate, out, counts_p, counts_q);
  });
}

epsaudit_status epsaudit_lrdp_grid_k(double alpha, double lipschitz_c,
                                     double lipschitz_d, double x_lo, double x_hi,
                                     double z_lo, double z_hi, double gamma,
                                     int32_t* out) {
  epsaudit_status pre = require(out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = epsaudit::lrdp_grid_bucket_count(
        alpha, lipschitz_c, lipschitz_d, epsaudit::Interval(x_lo, x_hi),
        epsaudit::Interval(z_lo, z_hi), gamma);
  });
}

epsaudit_status epsaudit_estimate_lrdp_grid(
    const epsaudit_mechanism* mechanism, double alpha, double gamma, double delta,
    double lipschitz_c, double lipschitz_d, double x_lo, double x_hi,
    uint64_t seed, const epsaudit_grid_options* options, epsaudit_grid_result* out,
    epsaudit_lrdp_plan* inner_plan, double* pair_eps, int32_t* pair_ok) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    epsaudit::LrdpPlan core_inner;
    const epsaudit::GridEstimate grid = epsaudit::estimate_grid_lrdp(
        *mechanism->impl, alpha, gamma, delta, lipschitz_c, lipschitz_d,
        epsaudit::Interval(x_lo, x_hi), seed, to_core(options), &core_inner);
    fill_grid_result(grid, out, pair_eps, pair_ok);
    if (inner_plan != nullptr) *inner_plan = from_core(core_inner);
  });
}

epsaudit_status epsaudit_run_safety(const epsaudit_mechanism* mechanism,
                                    double x1, double x2,
                                    const epsaudit_safety_config* config,
                                    uint64_t seed, epsaudit_safety_verdict* out,
                                    uint8_t* event_flags) {
  epsaudit_status pre = require(
      mechanism != nullptr && config != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    epsaudit::SafetyConfig core;
    core.claimed_c = config->claimed_c;
    core.slack_c = config->slack_c;
    core.required_probability = config->required_probability;
    core.runs = config->runs;
    core.workers = config->workers > 0 ? static_cast<unsigned>(config->workers) : 0;
    const epsaudit::SafetyVerdict verdict = epsaudit::run_safety_protocol(
        *mechanism->impl, x1, x2, config->gamma, config->delta, core, seed);
    out->empirical_frequency = verdict.empirical_frequency;
    out->theoretical_bound = verdict.theoretical_bound;
    out->suspicious = verdict.suspicious ? 1 : 0;
    out->m = verdict.m;
    out->w = verdict.w;
    out->slack_c = verdict.slack_c;
    out->n = verdict.n;
    out->seed = verdict.seed;
    if (event_flags != nullptr) {
      std::memcpy(event_flags, verdict.event_outcomes.data(),
                  verdict.event_outcomes.size());
    }
  });
}

epsaudit_status epsaudit_oracle_eps_pair(const epsaudit_mechanism* mechanism,
                                         double x1, double x2,
                                         epsaudit_oracle_result* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded(
      [&] { *out = from_core(epsaudit::oracle::eps_pair(*mechanism->impl, x1, x2)); });
}

epsaudit_status epsaudit_oracle_eps_pair_symmetric(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    epsaudit_oracle_result* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = from_core(epsaudit::oracle::eps_pair_symmetric(*mechanism->impl, x1, x2));
  });
}

epsaudit_status epsaudit_oracle_eps_global(const epsaudit_mechanism* mechanism,
                                           double x_lo, double x_hi,
                                           epsaudit_oracle_result* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = from_core(epsaudit::oracle::eps_global(*mechanism->impl, x_lo, x_hi));
  });
}

epsaudit_status epsaudit_oracle_renyi(const epsaudit_mechanism* mechanism,
                                      double x1, double x2, double alpha,
                                      epsaudit_oracle_result* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    *out = from_core(epsaudit::oracle::renyi(*mechanism->impl, x1, x2, alpha));
  });
}

epsaudit_status epsaudit_oracle_eps_discrete(const epsaudit_mechanism* mechanism,
                                             double x1, double x2,
                                             epsaudit_oracle_result* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const std::vector<double> p = mass_vector(*mechanism->impl, x1);
    const std::vector<double> q = mass_vector(*mechanism->impl, x2);
    const double forward = epsaudit::oracle::eps_discrete(p, q);
    const double backward = epsaudit::oracle::eps_discrete(q, p);
    out->value = forward >= backward ? forward : backward;
    out->method = EPSAUDIT_ORACLE_CLOSED_FORM;
    out->resolution = 0.0;
  });
}

epsaudit_status epsaudit_oracle_renyi_discrete(const epsaudit_mechanism* mechanism,
                                               double x1, double x2, double alpha,
                                               epsaudit_oracle_result* out) {
  epsaudit_status pre =
      require(mechanism != nullptr && out != nullptr, "null argument");
  if (pre != EPSAUDIT_OK) return pre;
  return guarded([&] {
    const std::vector<double> p = mass_vector(*mechanism->impl, x1);
    const std::vector<double> q = mass_vector(*mechanism->impl, x2);
    out->value = epsaudit::oracle::renyi_discrete(p, q, alpha);
    out->method = EPSAUDIT_ORACLE_CLOSED_FORM;
    out->resolution = 0.0;
  });
}

}  // extern "C"
