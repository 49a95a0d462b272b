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

#include "core/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace epsaudit::oracle {

namespace {

struct SimpsonState {
  double tol;
  int max_depth;
  const std::function<double(double)>* f;
};

double simpson_slice(double fa, double fm, double fb, double h) {
  return h / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const SimpsonState& st, double a, double b, double fa,
                        double fm, double fb, double whole, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm);
  const double frm = (*st.f)(rm);
  const double left = simpson_slice(fa, flm, fm, m - a);
  const double right = simpson_slice(fm, frm, fb, b - m);
  const double delta = left + right - whole;
  if (depth >= st.max_depth) {
    throw std::runtime_error("quadrature failed to converge at the requested tolerance");
  }
  if (std::abs(delta) <= 15.0 * st.tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(st, a, m, fa, flm, fm, left, depth + 1) +
         adaptive_simpson(st, m, b, fm, frm, fb, right, depth + 1);
}

// Integrates f over [a,b], splitting first at the supplied interior points
// so kinks do not defeat the error estimate.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol, std::span<const double> split_points) {
  std::vector<double> nodes{a, b};
  for (double s : split_points) {
    if (s > a && s < b) nodes.push_back(s);
  }
  std::sort(nodes.begin(), nodes.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    if (!(hi > lo)) continue;
    SimpsonState st{tol * (hi - lo) / (b - a), 48, &f};
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo);
    const double fmid = f(mid);
    const double fhi = f(hi);
    total += adaptive_simpson(st, lo, hi, flo, fmid, fhi,
                              simpson_slice(flo, fmid, fhi, hi - lo), 0);
  }
  return total;
}

}  // namespace

Result eps_pair_grid(const DensityFn& p, const DensityFn& q, Interval support,
                     std::size_t grid_points) {
  if (grid_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  double sup = -std::numeric_limits<double>::infinity();
  const double step = support.width() / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double z = i + 1 == grid_points ? support.hi : support.lo + i * step;
    const double pv = p(z);
    const double qv = q(z);
    if (pv > 0 && qv > 0) {
      sup = std::max(sup, std::log(pv) - std::log(qv));
    }
  }
  if (!std::isfinite(sup)) {
    throw std::domain_error("densities share no region of positive mass");
  }
  return {sup, Method::grid_sup, static_cast<double>(grid_points)};
}

Result eps_pair(const Mechanism& mechanism, double x1, double x2,
                std::size_t grid_points) {
  if (const auto* lap = dynamic_cast<const TruncatedLaplace*>(&mechanism)) {
    // sup_z (|z-x2|-|z-x1|)/B is reached at z = x1 where it equals
    // |x1-x2|/B; the normalization constants contribute log(K1/K2).
    const double value = std::abs(x1 - x2) / lap->scale() +
                         std::log(lap->normalization(x1)) -
                         std::log(lap->normalization(x2));
    return {value, Method::closed_form, 0.0};
  }
  const Interval support = mechanism.output_interval();
  return eps_pair_grid(density_for_secret(mechanism, x1),
                       density_for_secret(mechanism, x2), support, grid_points);
}

Result eps_pair_symmetric(const Mechanism& mechanism, double x1, double x2,
                          std::size_t grid_points) {
  Result forward = eps_pair(mechanism, x1, x2, grid_points);
  Result backward = eps_pair(mechanism, x2, x1, grid_points);
  return forward.value >= backward.value ? forward : backward;
}

Result eps_global(const Mechanism& mechanism, double x_lo, double x_hi,
                  int secret_grid, std::size_t z_grid) {
  if (x_lo == x_hi || secret_grid < 2) {
    // Degenerate secret set: only x1 == x2 pairs exist.
    return {0.0, Method::grid_sup, 1.0};
  }
  const Interval secrets(x_lo, x_hi);
  double sup = 0.0;  // the diagonal contributes log 1
  const double step = secrets.width() / (secret_grid - 1);
  for (int i = 0; i < secret_grid; ++i) {
    const double x1 = i + 1 == secret_grid ? secrets.hi : secrets.lo + i * step;
    for (int j = i + 1; j < secret_grid; ++j) {
      const double x2 = j + 1 == secret_grid ? secrets.hi : secrets.lo + j * step;
      sup = std::max(sup, eps_pair_symmetric(mechanism, x1, x2, z_grid).value);
    }
  }
  return {sup, Method::grid_sup, static_cast<double>(secret_grid)};
}

Result renyi_quadrature(const DensityFn& p, const DensityFn& q, Interval support,
                        double alpha, double tol,
                        std::span<const double> split_points) {
  if (!(alpha > 1)) throw std::invalid_argument("Renyi order must exceed 1");
  auto log_integrand = [&](double t) {
    const double pv = p(t);
    const double qv = q(t);
    if (!(pv > 0) || !(qv > 0)) {
      throw std::domain_error("Renyi quadrature requires positive densities");
    }
    return alpha * std::log(pv) + (1.0 - alpha) * std::log(qv);
  };

  // Large orders push p^a q^(1-a) across hundreds of decades, so the
  // integrand is rescaled by its coarse maximum and the tolerance applied
  // relative to a coarse magnitude estimate.
  double log_peak = -std::numeric_limits<double>::infinity();
  constexpr int kCoarse = 4096;
  for (int i = 0; i <= kCoarse; ++i) {
    const double t = support.lo + support.width() * i / kCoarse;
    log_peak = std::max(log_peak, log_integrand(t));
  }
  for (double s : split_points) {
    if (support.contains(s)) log_peak = std::max(log_peak, log_integrand(s));
  }
  auto scaled = [&](double t) { return std::exp(log_integrand(t) - log_peak); };
  double coarse_mass = 0.0;
  for (int i = 0; i < kCoarse; ++i) {
    const double t = support.lo + support.width() * (i + 0.5) / kCoarse;
    coarse_mass += scaled(t);
  }
  coarse_mass *= support.width() / kCoarse;

  const double integral = integrate(scaled, support.lo, support.hi,
                                    tol * std::max(coarse_mass, 1e-300),
                                    split_points);
  return {(log_peak + std::log(integral)) / (alpha - 1.0), Method::quadrature,
          tol};
}

Result renyi(const Mechanism& mechanism, double x1, double x2, double alpha,
             double tol) {
  const Interval support = mechanism.output_interval();
  const double kinks[] = {x1, x2};
  return renyi_quadrature(density_for_secret(mechanism, x1),
                          density_for_secret(mechanism, x2), support, alpha, tol,
                          kinks);
}

double renyi_discrete(std::span<const double> p, std::span<const double> q,
                      double alpha) {
  if (!(alpha > 1)) throw std::invalid_argument("Renyi order must exceed 1");
  if (p.size() != q.size()) throw std::invalid_argument("size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (!(q[i] > 0)) throw std::domain_error("q must dominate p");
    sum += std::exp(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]));
  }
  return std::log(sum) / (alpha - 1.0);
}

double eps_discrete(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("size mismatch");
  double sup = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0 && q[i] > 0) {
      sup = std::max(sup, std::log(p[i]) - std::log(q[i]));
    }
  }
  if (!std::isfinite(sup)) {
    throw std::domain_error("distributions share no outcome of positive mass");
  }
  return sup;
}

}  // namespace epsaudit::oracle
