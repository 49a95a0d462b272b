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
// Shared statistical machinery for the histogram estimators: the density
// band implied by Lipschitzness, the two-sided Chernoff envelope used by
// every sampling plan, histogram counting, and the monotone sample-size
// solver.

#ifndef EPSAUDIT_CORE_ESTIMATOR_CORE_HPP_
#define EPSAUDIT_CORE_ESTIMATOR_CORE_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "core/interval.hpp"

namespace epsaudit {

// Default cap for the sample-size search. Anything above this is beyond
// desk scale; the solver fails loudly instead of grinding on.
inline constexpr std::uint64_t kDefaultSampleCap = 1'000'000'000'000ULL;

struct DensityBounds {
  double lower;  // 1/W - CW/2; may be <= 0 once C >= 2/W^2
  double upper;  // 1/W + CW/2
};

// Pointwise band that every C-Lipschitz density on an interval of width W
// must stay inside.
DensityBounds lipschitz_density_bounds(double lipschitz_c, double width);

// Two-sided relative Chernoff envelope for a positive binomial count:
// bounds the probability that log(count) strays more than z from its
// expectation, conditioned on the count being positive. Strictly
// decreasing in x and in y. Requires x > 0, 0 < y <= 1, z > 0.
double concentration_f(double x, double y, double z);

// Uniform bin grid over a support interval. Bins are half-open
// [z_j, z_{j+1}) except the last, which is closed at the right endpoint so
// a sample exactly equal to it is not dropped.
class BinGrid {
 public:
  BinGrid(Interval support, int bin_count);

  const Interval& support() const { return support_; }
  int bin_count() const { return m_; }
  double bin_width() const { return w_; }
  double left_edge(int j) const { return support_.lo + j * w_; }

  // Bin index of a value; throws std::domain_error outside the support
  // (which signals a lying mechanism or a misconfigured support).
  int index_of(double z) const;

 private:
  Interval support_;
  int m_;
  double w_;
  double inv_w_;
};

struct HistogramPair {
  std::vector<std::uint64_t> counts_p;  // N_j
  std::vector<std::uint64_t> counts_q;  // M_j
  std::uint64_t n = 0;                  // samples per side

  bool has_empty_bin() const;
};

// Exact bin counts for the two sample vectors. Whether an empty bin is
// fatal is the calling estimator's decision.
HistogramPair count_histogram(const BinGrid& grid,
                              std::span<const double> samples_p,
                              std::span<const double> samples_q);

// Smallest n with predicate(n) true, assuming the predicate is monotone
// false->true in n. Geometric doubling followed by bisection. Throws
// InfeasibleError if nothing up to `cap` satisfies it.
std::uint64_t min_n_satisfying(const std::function<bool(std::uint64_t)>& predicate,
                               std::uint64_t cap = kDefaultSampleCap);

class Mechanism;

// Bin counts of n seeded draws from one mechanism side, streamed through a
// fixed buffer so the sample vector is never materialized. Chunk c of the
// stream draws with child seed c of side_seed.
std::vector<std::uint64_t> sampled_bin_counts(const Mechanism& mechanism,
                                              double x, std::uint64_t n,
                                              std::uint64_t side_seed,
                                              const BinGrid& grid);

// Category counts of n seeded draws from a discrete mechanism side.
std::vector<std::uint64_t> sampled_category_counts(const Mechanism& mechanism,
                                                   double x, std::uint64_t n,
                                                   std::uint64_t side_seed,
                                                   int categories);

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_ESTIMATOR_CORE_HPP_
