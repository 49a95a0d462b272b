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

#include "core/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

#include "core/rng.hpp"

namespace epsaudit {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)
constexpr double kInvSqrt2 = 0.7071067811865476;    // 1/sqrt(2)

double standard_normal_cdf(double t) { return 0.5 * std::erfc(-t * kInvSqrt2); }

void require_in(const Interval& iv, double v, const char* what) {
  if (!iv.contains(v)) {
    throw std::domain_error(std::string(what) + " outside the support interval");
  }
}

double integral_secret(double x, int categories) {
  double rounded = std::nearbyint(x);
  if (rounded != x || x < 0 || x >= categories) {
    throw std::domain_error("secret must be an integer category index");
  }
  return rounded;
}

}  // namespace

Interval Mechanism::secret_interval() const {
  throw std::logic_error("mechanism has no continuous secret domain");
}

Interval Mechanism::output_interval() const {
  throw std::logic_error("mechanism has no continuous output domain");
}

int Mechanism::category_count() const {
  throw std::logic_error("mechanism has no discrete output domain");
}

double Mechanism::density(double, double) const {
  throw std::logic_error("mechanism has no continuous density");
}

double Mechanism::category_mass(int, double) const {
  throw std::logic_error("mechanism has no probability mass function");
}

// ---------------------------------------------------------------------------
// TruncatedLaplace

TruncatedLaplace::TruncatedLaplace(double scale, Interval support)
    : scale_(scale), support_(support) {
  if (!(scale > 0)) throw std::invalid_argument("scale must be positive");
}

double TruncatedLaplace::normalization(double x) const {
  require_in(support_, x, "secret");
  const double left = std::exp(-(x - support_.lo) / scale_);
  const double right = std::exp(-(support_.hi - x) / scale_);
  return 1.0 / (scale_ * (2.0 - left - right));
}

double TruncatedLaplace::density(double z, double x) const {
  require_in(support_, z, "output");
  return normalization(x) * std::exp(-std::abs(z - x) / scale_);
}

double TruncatedLaplace::cdf(double z, double x) const {
  require_in(support_, z, "output");
  const double bk = scale_ * normalization(x);
  const double sign = z > x ? 1.0 : (z < x ? -1.0 : 0.0);
  const double near_mass = -std::expm1(-std::abs(z - x) / scale_);  // 1-e^{-|z-x|/B}
  const double left_mass = -std::expm1(-(x - support_.lo) / scale_);
  return std::clamp(bk * (sign * near_mass + left_mass), 0.0, 1.0);
}

double TruncatedLaplace::inverse_cdf(double p, double x) const {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::domain_error("probability must lie in [0,1]");
  }
  require_in(support_, x, "secret");
  if (p == 0.0) return support_.lo;
  if (p == 1.0) return support_.hi;

  const double bk = scale_ * normalization(x);
  const double left_mass = -std::expm1(-(x - support_.lo) / scale_);
  const double cdf_at_x = bk * left_mass;
  double z;
  if (p > cdf_at_x) {
    z = x - scale_ * std::log1p(left_mass - p / bk);
  } else if (p < cdf_at_x) {
    z = x + scale_ * std::log1p(p / bk - left_mass);
  } else {
    return x;
  }
  return std::clamp(z, support_.lo, support_.hi);
}

void TruncatedLaplace::sample(double x, std::size_t n, std::uint64_t seed,
                              std::span<double> out) const {
  if (out.size() < n) throw std::invalid_argument("output span too small");
  require_in(support_, x, "secret");
  const double bk = scale_ * normalization(x);
  const double left_mass = -std::expm1(-(x - support_.lo) / scale_);
  const double cdf_at_x = bk * left_mass;
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform_open();
    double z;
    if (u > cdf_at_x) {
      z = x - scale_ * std::log1p(left_mass - u / bk);
    } else {
      z = x + scale_ * std::log1p(u / bk - left_mass);
    }
    out[i] = std::clamp(z, support_.lo, support_.hi);
  }
}

double TruncatedLaplace::analytic_lipschitz_c() const {
  // |df/dz| = f/B, maximized with the secret at an endpoint where the
  // normalization constant peaks.
  const double k_edge = 1.0 / (scale_ * -std::expm1(-support_.width() / scale_));
  return k_edge / scale_;
}

double TruncatedLaplace::analytic_epsilon() const {
  return support_.width() / scale_;
}

// ---------------------------------------------------------------------------
// TruncatedGaussian

TruncatedGaussian::TruncatedGaussian(double sigma, Interval support)
    : sigma_(sigma), support_(support) {
  if (!(sigma > 0)) throw std::invalid_argument("sigma must be positive");
}

double TruncatedGaussian::normalization(double x) const {
  require_in(support_, x, "secret");
  return standard_normal_cdf((support_.hi - x) / sigma_) -
         standard_normal_cdf((support_.lo - x) / sigma_);
}

double TruncatedGaussian::density(double z, double x) const {
  require_in(support_, z, "output");
  const double t = (z - x) / sigma_;
  return kInvSqrt2Pi * std::exp(-0.5 * t * t) / (sigma_ * normalization(x));
}

double TruncatedGaussian::cdf(double z, double x) const {
  require_in(support_, z, "output");
  const double lo_mass = standard_normal_cdf((support_.lo - x) / sigma_);
  const double value = (standard_normal_cdf((z - x) / sigma_) - lo_mass) / normalization(x);
  return std::clamp(value, 0.0, 1.0);
}

namespace {

// Maps an interior probability of the truncated law onto the parent
// normal's scale, keeping the argument strictly inside (0,1): for very
// small sigma the affine map can round onto an endpoint.
double normal_argument(double lo_mass, double norm, double p) {
  return std::clamp(lo_mass + p * norm, 0x1.0p-1074, 0x1.fffffffffffffp-1);
}

}  // namespace

double TruncatedGaussian::inverse_cdf(double p, double x) const {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::domain_error("probability must lie in [0,1]");
  }
  require_in(support_, x, "secret");
  if (p == 0.0) return support_.lo;
  if (p == 1.0) return support_.hi;
  const double lo_mass = standard_normal_cdf((support_.lo - x) / sigma_);
  const double z =
      x + sigma_ * inverse_normal_cdf(normal_argument(lo_mass, normalization(x), p));
  return std::clamp(z, support_.lo, support_.hi);
}

void TruncatedGaussian::sample(double x, std::size_t n, std::uint64_t seed,
                               std::span<double> out) const {
  if (out.size() < n) throw std::invalid_argument("output span too small");
  require_in(support_, x, "secret");
  const double lo_mass = standard_normal_cdf((support_.lo - x) / sigma_);
  const double norm = normalization(x);
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double z = x + sigma_ * inverse_normal_cdf(
                                      normal_argument(lo_mass, norm, rng.uniform_open()));
    out[i] = std::clamp(z, support_.lo, support_.hi);
  }
}

// ---------------------------------------------------------------------------
// KRandomizedResponse

KRandomizedResponse::KRandomizedResponse(int categories, double epsilon)
    : k_(categories), epsilon_(epsilon) {
  if (categories < 2) throw std::invalid_argument("k-RR needs at least 2 categories");
  if (!(epsilon >= 0)) throw std::invalid_argument("epsilon must be nonnegative");
}

double KRandomizedResponse::truth_probability() const {
  return std::exp(epsilon_) / (std::exp(epsilon_) + k_ - 1);
}

double KRandomizedResponse::lie_probability() const {
  return 1.0 / (std::exp(epsilon_) + k_ - 1);
}

double KRandomizedResponse::category_mass(int z, double x) const {
  if (z < 0 || z >= k_) throw std::domain_error("category out of range");
  const double truth = integral_secret(x, k_);
  return z == static_cast<int>(truth) ? truth_probability() : lie_probability();
}

void KRandomizedResponse::sample(double x, std::size_t n, std::uint64_t seed,
                                 std::span<double> out) const {
  if (out.size() < n) throw std::invalid_argument("output span too small");
  const int truth = static_cast<int>(integral_secret(x, k_));
  const double keep = truth_probability();
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    if (rng.uniform_open() < keep) {
      out[i] = truth;
    } else {
      auto other = static_cast<int>(rng.below(static_cast<std::uint64_t>(k_ - 1)));
      out[i] = other >= truth ? other + 1 : other;
    }
  }
}

// ---------------------------------------------------------------------------
// AdversarialBernoulliPair

AdversarialBernoulliPair::AdversarialBernoulliPair(double d, double h, double alpha)
    : d_(d), h_(h), alpha_(alpha) {
  if (!(d > 0) || !(d < 1)) throw std::invalid_argument("d must lie in (0,1)");
  if (!(h > 1)) throw std::invalid_argument("h must exceed 1");
  if (std::isinf(alpha)) {
    p0_ = d;
    p1_ = d / h;
  } else if (alpha > 1) {
    p0_ = std::pow(d, 1.0 / alpha);
    p1_ = std::pow(d / std::pow(h, alpha - 1.0), 1.0 / (alpha - 1.0));
  } else {
    throw std::invalid_argument("order must be > 1 or infinite");
  }
  if (!(p0_ >= 0) || p0_ > 1 || !(p1_ >= 0) || p1_ > 1) {
    throw std::invalid_argument("(d,h,alpha) yields an invalid Bernoulli parameter");
  }
}

double AdversarialBernoulliPair::success_probability(double x) const {
  const double side = integral_secret(x, 2);
  return side == 0 ? p0_ : p1_;
}

double AdversarialBernoulliPair::category_mass(int z, double x) const {
  if (z != 0 && z != 1) throw std::domain_error("category out of range");
  const double p = success_probability(x);
  return z == 1 ? p : 1.0 - p;
}

void AdversarialBernoulliPair::sample(double x, std::size_t n, std::uint64_t seed,
                                      std::span<double> out) const {
  if (out.size() < n) throw std::invalid_argument("output span too small");
  const double p = success_probability(x);
  Xoshiro256pp rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = rng.uniform_open() < p ? 1.0 : 0.0;
  }
}

// ---------------------------------------------------------------------------
// Numeric Lipschitz constants

std::function<double(double)> density_for_secret(const Mechanism& mechanism,
                                                 double x) {
  if (const auto* lap = dynamic_cast<const TruncatedLaplace*>(&mechanism)) {
    const double k = lap->normalization(x);
    const double inv_b = 1.0 / lap->scale();
    return [k, inv_b, x](double z) { return k * std::exp(-std::abs(z - x) * inv_b); };
  }
  if (const auto* gau = dynamic_cast<const TruncatedGaussian*>(&mechanism)) {
    const double scale = 1.0 / (gau->sigma() * gau->normalization(x)) * kInvSqrt2Pi;
    const double inv_sigma = 1.0 / gau->sigma();
    return [scale, inv_sigma, x](double z) {
      const double t = (z - x) * inv_sigma;
      return scale * std::exp(-0.5 * t * t);
    };
  }
  return [&mechanism, x](double z) { return mechanism.density(z, x); };
}

LipschitzConstants measure_lipschitz_constants(const Mechanism& mechanism) {
  if (mechanism.is_discrete()) {
    throw std::logic_error("Lipschitz constants are defined for continuous mechanisms");
  }
  const Interval z_iv = mechanism.output_interval();
  const Interval x_iv = mechanism.secret_interval();

  constexpr int kCoarse = 501;
  constexpr int kFine = 20001;
  constexpr double kInflation = 1.0 + 1e-3;

  // Output-direction constant: coarse sweep over secrets, fine central
  // differences along z. Difference endpoints clamp into the interval so
  // rounding never steps outside the domain.
  const double hz = 1e-6 * z_iv.width();
  double max_dz = 0.0;
  for (int ix = 0; ix < kCoarse; ++ix) {
    const double x = x_iv.lo + x_iv.width() * ix / (kCoarse - 1);
    const auto f = density_for_secret(mechanism, x);
    for (int iz = 0; iz < kFine; ++iz) {
      const double z = (z_iv.lo + hz) + (z_iv.width() - 2 * hz) * iz / (kFine - 1);
      const double z_hi = std::min(z + hz, z_iv.hi);
      const double z_lo = std::max(z - hz, z_iv.lo);
      const double slope = std::abs(f(z_hi) - f(z_lo)) / (z_hi - z_lo);
      if (slope > max_dz) max_dz = slope;
    }
  }

  // Secret-direction constant: fine sweep over secrets (normalizations
  // hoisted per secret), coarse sweep along z.
  const double hx = 1e-6 * x_iv.width();
  double max_dx = 0.0;
  for (int ix = 0; ix < kFine; ++ix) {
    const double x = (x_iv.lo + hx) + (x_iv.width() - 2 * hx) * ix / (kFine - 1);
    const double x_hi = std::min(x + hx, x_iv.hi);
    const double x_lo = std::max(x - hx, x_iv.lo);
    const auto f_hi = density_for_secret(mechanism, x_hi);
    const auto f_lo = density_for_secret(mechanism, x_lo);
    for (int iz = 0; iz < kCoarse; ++iz) {
      const double z = z_iv.lo + z_iv.width() * iz / (kCoarse - 1);
      const double slope = std::abs(f_hi(z) - f_lo(z)) / (x_hi - x_lo);
      if (slope > max_dx) max_dx = slope;
    }
  }

  const double c = max_dz * kInflation;
  const double d = max_dx * kInflation;
  const double w = z_iv.width();
  return {c, d, c < 2.0 / (w * w)};
}

// ---------------------------------------------------------------------------
// Inverse standard normal CDF, Wichura's algorithm AS241 (PPND16).

double inverse_normal_cdf(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw std::domain_error("inverse normal CDF requires p in (0,1)");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

}  // namespace epsaudit
