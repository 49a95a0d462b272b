/* Copyright 2026 The epsaudit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* epsaudit -- black-box auditing of local differential privacy budgets.
 *
 * C interface of the epsaudit shared library. Mechanisms are opaque
 * handles; every fallible call returns an epsaudit_status and writes its
 * results through out-pointers. On any non-OK status a human-readable
 * message is available from epsaudit_last_error() (thread-local).
 *
 * Reproducibility contract: every sampling entry point takes a 64-bit
 * seed and is a pure function of its arguments. Child seeds for
 * independent streams (repetitions, grid pairs) come from
 * epsaudit_child_seed(root, index).
 */

#ifndef EPSAUDIT_H_
#define EPSAUDIT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define EPSAUDIT_API __declspec(dllexport)
#else
#define EPSAUDIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum epsaudit_status {
  EPSAUDIT_OK = 0,
  /* A parameter violated its documented precondition. */
  EPSAUDIT_ERROR_INVALID_ARGUMENT = 1,
  /* A value fell outside the mechanism's domain (secret, output, p, ...). */
  EPSAUDIT_ERROR_DOMAIN = 2,
  /* The claimed C is not below 2/W^2: no guaranteed plan exists. */
  EPSAUDIT_ERROR_INAPPLICABLE = 3,
  /* No sample count up to the cap satisfies the plan inequality. */
  EPSAUDIT_ERROR_INFEASIBLE = 4,
  /* Every attempted estimate ended with an empty bin. */
  EPSAUDIT_ERROR_ESTIMATION_FAILED = 5,
  /* Numerical routine failed to converge, or an unexpected condition. */
  EPSAUDIT_ERROR_INTERNAL = 6
} epsaudit_status;

EPSAUDIT_API const char* epsaudit_status_name(epsaudit_status status);

/* Message describing the most recent failure on this thread. */
EPSAUDIT_API const char* epsaudit_last_error(void);

EPSAUDIT_API const char* epsaudit_version(void);

/* Child seed `index` of a root seed (SplitMix64-based, O(1), stable). */
EPSAUDIT_API uint64_t epsaudit_child_seed(uint64_t root, uint64_t index);

/* -------------------------------------------------------------------- */
/* Mechanisms                                                            */

typedef struct epsaudit_mechanism epsaudit_mechanism;

/* Laplace noise of scale B renormalized to [lo, hi]. */
EPSAUDIT_API epsaudit_status epsaudit_trunc_laplace_create(
    double scale, double lo, double hi, epsaudit_mechanism** out);

/* Gaussian noise of scale sigma renormalized to [lo, hi]. */
EPSAUDIT_API epsaudit_status epsaudit_trunc_gaussian_create(
    double sigma, double lo, double hi, epsaudit_mechanism** out);

/* k-ary randomized response with budget epsilon over {0, ..., k-1}. */
EPSAUDIT_API epsaudit_status epsaudit_krr_create(int categories, double epsilon,
                                                 epsaudit_mechanism** out);

/* Bernoulli pair over {0,1} used by the impossibility demonstrations.
 * Pass alpha = INFINITY (or any non-finite value) for the plain-ratio
 * construction (B(d), B(d/h)); a finite alpha > 1 selects the
 * order-alpha construction. */
EPSAUDIT_API epsaudit_status epsaudit_adversarial_bernoulli_create(
    double d, double h, double alpha, epsaudit_mechanism** out);

EPSAUDIT_API void epsaudit_mechanism_free(epsaudit_mechanism* mechanism);

EPSAUDIT_API int epsaudit_mechanism_is_discrete(const epsaudit_mechanism* mechanism);

/* Continuous output interval; EPSAUDIT_ERROR_INVALID_ARGUMENT on discrete
 * mechanisms. */
EPSAUDIT_API epsaudit_status epsaudit_mechanism_output_interval(
    const epsaudit_mechanism* mechanism, double* lo, double* hi);

/* Category count; EPSAUDIT_ERROR_INVALID_ARGUMENT on continuous ones. */
EPSAUDIT_API epsaudit_status epsaudit_mechanism_category_count(
    const epsaudit_mechanism* mechanism, int* out);

/* Analytic density f(z|x) (continuous mechanisms). */
EPSAUDIT_API epsaudit_status epsaudit_mechanism_density(
    const epsaudit_mechanism* mechanism, double z, double x, double* out);

/* Probability mass of category z (discrete mechanisms). */
EPSAUDIT_API epsaudit_status epsaudit_mechanism_category_mass(
    const epsaudit_mechanism* mechanism, int z, double x, double* out);

/* n i.i.d. draws from p(.|x) into out[0..n). Discrete mechanisms store
 * category indices as doubles. */
EPSAUDIT_API epsaudit_status epsaudit_mechanism_sample(
    const epsaudit_mechanism* mechanism, double x, uint64_t n, uint64_t seed,
    double* out);

/* Numerically measured Lipschitz constants of a continuous mechanism:
 * c bounds |df/dz|, d bounds |df/dx|, applicable reports c < 2/W^2. */
EPSAUDIT_API epsaudit_status epsaudit_mechanism_lipschitz(
    const epsaudit_mechanism* mechanism, double* c, double* d, int* applicable);

/* Closed-form constants of a truncated Laplace mechanism on [lo, hi]:
 * the exact z-direction Lipschitz constant and the exact budget W/B. */
EPSAUDIT_API epsaudit_status epsaudit_trunc_laplace_constants(
    double scale, double lo, double hi, double* c, double* epsilon);

/* -------------------------------------------------------------------- */
/* Plain-ratio (epsilon-LDP) estimation                                  */

typedef struct epsaudit_ldp_plan {
  double gamma;
  double delta;
  double lipschitz_c;
  double z_lo;
  double z_hi;
  double tau; /* density floor 1/W - CW/2 */
  double w;   /* bin width */
  int32_t m;  /* bin count */
  uint64_t n; /* samples per side */
  int32_t theoretical; /* 1: guaranteed plan, 0: practical override */
} epsaudit_ldp_plan;

EPSAUDIT_API epsaudit_status epsaudit_plan_ldp(double gamma, double delta,
                                               double lipschitz_c, double z_lo,
                                               double z_hi,
                                               epsaudit_ldp_plan* out);

EPSAUDIT_API epsaudit_status epsaudit_plan_ldp_practical(
    double gamma, double delta, double lipschitz_c, double z_lo, double z_hi,
    int32_t m, uint64_t n, epsaudit_ldp_plan* out);

typedef struct epsaudit_pair_result {
  int32_t succeeded;  /* 0 means an empty bin ended the run (in-band) */
  double epsilon_hat; /* meaningful iff succeeded */
  int32_t argmax_bin; /* electing bin for ratio estimates, -1 otherwise */
  uint64_t seed;
} epsaudit_pair_result;

/* One estimator run on the pair (x1, x2). directed = 0 gives the
 * two-sided default. counts_p/counts_q, when non-NULL, receive the m bin
 * counts of each side. */
EPSAUDIT_API epsaudit_status epsaudit_estimate_ldp_pair(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    const epsaudit_ldp_plan* plan, uint64_t seed, int directed,
    epsaudit_pair_result* out, uint64_t* counts_p, uint64_t* counts_q);

/* Bucket count used by the grid estimator (>= 2). */
EPSAUDIT_API epsaudit_status epsaudit_ldp_grid_k(double lipschitz_d, double x_lo,
                                                 double x_hi, double tau,
                                                 double gamma, int32_t* out);

typedef struct epsaudit_grid_options {
  int32_t k_override;  /* 0: derive k from D */
  int32_t m_override;  /* 0: theoretical plan */
  uint64_t n_override; /* 0: theoretical plan */
  int32_t directed;
  int32_t workers; /* 0: hardware concurrency */
} epsaudit_grid_options;

typedef struct epsaudit_grid_result {
  int32_t succeeded; /* at least one pair run succeeded */
  double epsilon_hat;
  int32_t argmax_i;
  int32_t argmax_j;
  int32_t k;
  uint64_t pair_count; /* k(k-1)/2 */
} epsaudit_grid_result;

/* Grid estimate over [x_lo, x_hi] with k(k-1)/2 inner pair runs at
 * precision gamma/3 and confidence sqrt(delta). Optional per-pair outputs
 * (arrays of length k(k-1)/2, pairs ordered lexicographically by (i,j)):
 * pair_eps gets the estimate (NaN for failed pairs), pair_ok the status.
 * Query the required length first with epsaudit_ldp_grid_k or by passing
 * both arrays as NULL and reading result->pair_count. */
EPSAUDIT_API epsaudit_status epsaudit_estimate_ldp_grid(
    const epsaudit_mechanism* mechanism, double gamma, double delta,
    double lipschitz_c, double lipschitz_d, double x_lo, double x_hi,
    uint64_t seed, const epsaudit_grid_options* options,
    epsaudit_grid_result* out, epsaudit_ldp_plan* inner_plan, double* pair_eps,
    int32_t* pair_ok);

/* Finite output domains: categories act as bins and p_min replaces the
 * density floor. */
typedef struct epsaudit_discrete_plan {
  double gamma;
  double delta;
  double p_min;
  int32_t m; /* category count */
  uint64_t n;
  int32_t theoretical;
} epsaudit_discrete_plan;

EPSAUDIT_API epsaudit_status epsaudit_plan_ldp_discrete(
    double gamma, double delta, double p_min, int32_t categories,
    epsaudit_discrete_plan* out);

EPSAUDIT_API epsaudit_status epsaudit_estimate_ldp_discrete(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    const epsaudit_discrete_plan* plan, uint64_t n_override /* 0: plan n */,
    uint64_t seed, int directed, epsaudit_pair_result* out, uint64_t* counts_p,
    uint64_t* counts_q);

/* -------------------------------------------------------------------- */
/* Renyi (alpha-LRDP) estimation                                         */

typedef struct epsaudit_lrdp_plan {
  double alpha;
  double gamma;
  double delta;
  double lipschitz_c;
  double z_lo;
  double z_hi;
  double tau0;
  double tau1;
  double k_upper;     /* K */
  double k_lower;     /* K' */
  double gamma_prime; /* per-bin log-count tolerance */
  double w;
  int32_t m;
  uint64_t n;
  int32_t theoretical;
} epsaudit_lrdp_plan;

EPSAUDIT_API epsaudit_status epsaudit_plan_lrdp(double alpha, double gamma,
                                                double delta, double lipschitz_c,
                                                double z_lo, double z_hi,
                                                epsaudit_lrdp_plan* out);

EPSAUDIT_API epsaudit_status epsaudit_plan_lrdp_practical(
    double alpha, double gamma, double delta, double lipschitz_c, double z_lo,
    double z_hi, int32_t m, uint64_t n, epsaudit_lrdp_plan* out);

EPSAUDIT_API epsaudit_status epsaudit_estimate_lrdp_pair(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    const epsaudit_lrdp_plan* plan, uint64_t seed, int directed,
    epsaudit_pair_result* out, uint64_t* counts_p, uint64_t* counts_q);

EPSAUDIT_API epsaudit_status epsaudit_lrdp_grid_k(double alpha,
                                                  double lipschitz_c,
                                                  double lipschitz_d, double x_lo,
                                                  double x_hi, double z_lo,
                                                  double z_hi, double gamma,
                                                  int32_t* out);

EPSAUDIT_API epsaudit_status epsaudit_estimate_lrdp_grid(
    const epsaudit_mechanism* mechanism, double alpha, double gamma, double delta,
    double lipschitz_c, double lipschitz_d, double x_lo, double x_hi,
    uint64_t seed, const epsaudit_grid_options* options,
    epsaudit_grid_result* out, epsaudit_lrdp_plan* inner_plan, double* pair_eps,
    int32_t* pair_ok);

/* -------------------------------------------------------------------- */
/* Lipschitzness safety check                                            */

typedef struct epsaudit_safety_config {
  double claimed_c;
  double slack_c; /* 0 selects the default claimed_c*w^2/2 */
  double required_probability;
  double gamma;
  double delta;
  int32_t runs;
  int32_t workers;
} epsaudit_safety_config;

typedef struct epsaudit_safety_verdict {
  double empirical_frequency;
  double theoretical_bound;
  int32_t suspicious;
  int32_t m;
  double w;
  double slack_c;
  uint64_t n;
  uint64_t seed;
} epsaudit_safety_verdict;

/* Runs the adjacent-bin smoothness check config->runs times. event_flags,
 * when non-NULL, receives one 0/1 entry per run. */
EPSAUDIT_API epsaudit_status epsaudit_run_safety(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    const epsaudit_safety_config* config, uint64_t seed,
    epsaudit_safety_verdict* out, uint8_t* event_flags);

/* -------------------------------------------------------------------- */
/* Oracle (analytic ground truth, for reports and verification)          */

typedef enum epsaudit_oracle_method {
  EPSAUDIT_ORACLE_CLOSED_FORM = 0,
  EPSAUDIT_ORACLE_GRID_SUP = 1,
  EPSAUDIT_ORACLE_QUADRATURE = 2
} epsaudit_oracle_method;

typedef struct epsaudit_oracle_result {
  double value;
  int32_t method;
  double resolution;
} epsaudit_oracle_result;

/* Directed budget sup_z log(p(z|x1)/p(z|x2)). */
EPSAUDIT_API epsaudit_status epsaudit_oracle_eps_pair(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    epsaudit_oracle_result* out);

/* Two-sided pair budget (max of the two directions). */
EPSAUDIT_API epsaudit_status epsaudit_oracle_eps_pair_symmetric(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    epsaudit_oracle_result* out);

/* Overall budget over secrets in [x_lo, x_hi]. */
EPSAUDIT_API epsaudit_status epsaudit_oracle_eps_global(
    const epsaudit_mechanism* mechanism, double x_lo, double x_hi,
    epsaudit_oracle_result* out);

/* Order-alpha Renyi divergence between the outputs of x1 and x2. */
EPSAUDIT_API epsaudit_status epsaudit_oracle_renyi(
    const epsaudit_mechanism* mechanism, double x1, double x2, double alpha,
    epsaudit_oracle_result* out);

/* Exact budget of a discrete mechanism pair (max over both directions of
 * the largest log mass ratio). */
EPSAUDIT_API epsaudit_status epsaudit_oracle_eps_discrete(
    const epsaudit_mechanism* mechanism, double x1, double x2,
    epsaudit_oracle_result* out);

/* Order-alpha divergence of a discrete mechanism pair. */
EPSAUDIT_API epsaudit_status epsaudit_oracle_renyi_discrete(
    const epsaudit_mechanism* mechanism, double x1, double x2, double alpha,
    epsaudit_oracle_result* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EPSAUDIT_H_ */
