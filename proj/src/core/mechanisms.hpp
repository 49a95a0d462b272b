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
// Reference obfuscation mechanisms. Each one exposes the black-box
// sampling interface the estimators consume (i.i.d. draws for a chosen
// secret, reproducible under a seed) plus exact densities/CDFs for the
// oracle and the tests. Mechanisms are immutable after construction and
// safe for concurrent use: every draw call carries its own seed.

#ifndef EPSAUDIT_CORE_MECHANISMS_HPP_
#define EPSAUDIT_CORE_MECHANISMS_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core/interval.hpp"

namespace epsaudit {

class Mechanism {
 public:
  virtual ~Mechanism() = default;

  virtual bool is_discrete() const = 0;

  // Continuous mechanisms: secret and output intervals. Throws
  // std::logic_error on discrete mechanisms.
  virtual Interval secret_interval() const;
  virtual Interval output_interval() const;

  // Discrete mechanisms: number of output categories. Throws
  // std::logic_error on continuous mechanisms.
  virtual int category_count() const;

  // n i.i.d. draws from p(.|x). Deterministic given (x, n, seed).
  // Continuous mechanisms fill real values inside the output interval;
  // discrete mechanisms fill category indices stored as doubles.
  virtual void sample(double x, std::size_t n, std::uint64_t seed,
                      std::span<double> out) const = 0;

  // Analytic density (continuous) at output z for secret x.
  virtual double density(double z, double x) const;

  // Analytic probability mass (discrete) of category z for secret x.
  virtual double category_mass(int z, double x) const;

  std::vector<double> sample(double x, std::size_t n, std::uint64_t seed) const {
    std::vector<double> out(n);
    sample(x, n, seed, out);
    return out;
  }
};

// Laplace noise renormalized to a closed interval. Density
// f(z|x,B) = K_{x,B} e^{-|z-x|/B}. Sampling uses the closed-form inverse
// CDF applied to uniforms drawn from the open interval (0,1).
class TruncatedLaplace final : public Mechanism {
 public:
  TruncatedLaplace(double scale, Interval support);

  double scale() const { return scale_; }
  const Interval& support() const { return support_; }

  // K_{x,B}: strictly positive, symmetric in the distance of x from the
  // two endpoints, largest when x sits at an endpoint.
  double normalization(double x) const;

  double density(double z, double x) const override;
  double cdf(double z, double x) const;
  double inverse_cdf(double p, double x) const;

  // Closed-form constants on this support: the tightest z-Lipschitz
  // constant max_x K_{x,B}/B, and the exact privacy budget W/B (the
  // normalization constants at the two extremes cancel).
  double analytic_lipschitz_c() const;
  double analytic_epsilon() const;

  bool is_discrete() const override { return false; }
  Interval secret_interval() const override { return support_; }
  Interval output_interval() const override { return support_; }
  void sample(double x, std::size_t n, std::uint64_t seed,
              std::span<double> out) const override;
  using Mechanism::sample;

 private:
  double scale_;
  Interval support_;
};

// Gaussian noise renormalized to a closed interval, same truncation
// process as for the Laplace.
class TruncatedGaussian final : public Mechanism {
 public:
  TruncatedGaussian(double sigma, Interval support);

  double sigma() const { return sigma_; }
  const Interval& support() const { return support_; }

  // Mass of the un-truncated Gaussian kernel on the support.
  double normalization(double x) const;

  double density(double z, double x) const override;
  double cdf(double z, double x) const;
  double inverse_cdf(double p, double x) const;

  bool is_discrete() const override { return false; }
  Interval secret_interval() const override { return support_; }
  Interval output_interval() const override { return support_; }
  void sample(double x, std::size_t n, std::uint64_t seed,
              std::span<double> out) const override;
  using Mechanism::sample;

 private:
  double sigma_;
  Interval support_;
};

// k-ary randomized response: reports the true category with probability
// e^eps / (e^eps + k - 1) and any other fixed category with probability
// 1 / (e^eps + k - 1).
class KRandomizedResponse final : public Mechanism {
 public:
  KRandomizedResponse(int categories, double epsilon);

  int categories() const { return k_; }
  double epsilon() const { return epsilon_; }
  double truth_probability() const;
  double lie_probability() const;

  bool is_discrete() const override { return true; }
  int category_count() const override { return k_; }
  double category_mass(int z, double x) const override;
  void sample(double x, std::size_t n, std::uint64_t seed,
              std::span<double> out) const override;
  using Mechanism::sample;

 private:
  int k_;
  double epsilon_;
};

// The Bernoulli pair behind the impossibility constructions: two output
// distributions over {0,1} whose log-ratio (resp. Renyi divergence) is at
// least log h, yet which emit almost nothing but zeros when d is tiny.
// A non-finite order selects the plain-ratio construction
// (B(d), B(d/h)); a finite order alpha > 1 selects
// (B(d^{1/alpha}), B((d/h^{alpha-1})^{1/(alpha-1)})).
class AdversarialBernoulliPair final : public Mechanism {
 public:
  AdversarialBernoulliPair(double d, double h, double alpha);

  double d() const { return d_; }
  double h() const { return h_; }
  double alpha() const { return alpha_; }

  // Bernoulli parameter of the side selected by secret x in {0,1}.
  double success_probability(double x) const;

  bool is_discrete() const override { return true; }
  int category_count() const override { return 2; }
  double category_mass(int z, double x) const override;
  void sample(double x, std::size_t n, std::uint64_t seed,
              std::span<double> out) const override;
  using Mechanism::sample;

 private:
  double d_;
  double h_;
  double alpha_;
  double p0_;  // parameter for x = 0
  double p1_;  // parameter for x = 1
};

struct LipschitzConstants {
  double c;                 // output-direction constant (z |-> f(z|x))
  double d;                 // secret-direction constant (x |-> f(z|x))
  bool theorem_applicable;  // c < 2/W^2
};

// Density of a continuous mechanism as a function of the output alone,
// with everything that depends only on the secret (normalization
// constants) evaluated once. Used by grid sweeps.
std::function<double(double)> density_for_secret(const Mechanism& mechanism,
                                                 double x);

// Numeric Lipschitz constants for a continuous mechanism: maximize the
// central-difference |df/dz| and |df/dx| over dense grids, then inflate
// by 1e-3 so the result is a usable upper bound despite discretization.
LipschitzConstants measure_lipschitz_constants(const Mechanism& mechanism);

// Inverse of the standard normal CDF (Wichura's AS241, double precision).
double inverse_normal_cdf(double p);

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_MECHANISMS_HPP_
