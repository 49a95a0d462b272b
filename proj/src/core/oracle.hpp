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
// Ground truth from analytic densities: the exact log-ratio budget of a
// secret pair, its supremum over a secret interval, and Renyi divergences
// by adaptive quadrature. The estimators never call into this module; it
// exists so tests and reports can compare against an independent route.

#ifndef EPSAUDIT_CORE_ORACLE_HPP_
#define EPSAUDIT_CORE_ORACLE_HPP_

#include <cstddef>
#include <functional>
#include <span>

#include "core/interval.hpp"
#include "core/mechanisms.hpp"

namespace epsaudit::oracle {

enum class Method { closed_form, grid_sup, quadrature };

struct Result {
  double value;
  Method method;
  // Grid size for grid_sup, tolerance for quadrature, 0 for closed forms.
  double resolution;
};

using DensityFn = std::function<double(double)>;

// sup over z of log(p(z)/q(z)) on the region where both densities are
// positive, by dense grid search with endpoint inclusion.
Result eps_pair_grid(const DensityFn& p, const DensityFn& q, Interval support,
                     std::size_t grid_points = 1'000'001);

// Directed pair budget for a continuous mechanism. Uses the closed form
// for the truncated Laplace, grid search otherwise.
Result eps_pair(const Mechanism& mechanism, double x1, double x2,
                std::size_t grid_points = 1'000'001);

// Two-sided pair budget: max of the two directed values.
Result eps_pair_symmetric(const Mechanism& mechanism, double x1, double x2,
                          std::size_t grid_points = 1'000'001);

// Overall budget: sup of the pair budget over a dense grid of secret
// pairs. For the reference unimodal mechanisms the sup sits at the two
// extremes; the grid confirms rather than assumes that. A degenerate
// secret range (x_lo == x_hi) has budget 0.
Result eps_global(const Mechanism& mechanism, double x_lo, double x_hi,
                  int secret_grid = 101, std::size_t z_grid = 20'001);

// Renyi divergence of order alpha > 1 between two densities on the
// support, by adaptive Simpson quadrature. split_points marks density
// kinks (e.g. the Laplace center) where the integrand must be subdivided.
Result renyi_quadrature(const DensityFn& p, const DensityFn& q, Interval support,
                        double alpha, double tol = 1e-10,
                        std::span<const double> split_points = {});

// Renyi divergence between the output distributions of a continuous
// mechanism for two secrets.
Result renyi(const Mechanism& mechanism, double x1, double x2, double alpha,
             double tol = 1e-10);

// Discrete counterparts over explicit probability vectors.
double renyi_discrete(std::span<const double> p, std::span<const double> q,
                      double alpha);
double eps_discrete(std::span<const double> p, std::span<const double> q);

}  // namespace epsaudit::oracle

#endif  // EPSAUDIT_CORE_ORACLE_HPP_
