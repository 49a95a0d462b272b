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

#include "core/estimator_core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "core/errors.hpp"
#include "core/mechanisms.hpp"
#include "core/rng.hpp"

namespace epsaudit {

DensityBounds lipschitz_density_bounds(double lipschitz_c, double width) {
  if (!(width > 0)) throw std::invalid_argument("width must be positive");
  if (!(lipschitz_c >= 0)) throw std::invalid_argument("C must be nonnegative");
  const double half_band = lipschitz_c * width / 2.0;
  return {1.0 / width - half_band, 1.0 / width + half_band};
}

double concentration_f(double x, double y, double z) {
  if (!(x > 0)) throw std::domain_error("concentration_f requires x > 0");
  if (!(y > 0) || y > 1) throw std::domain_error("concentration_f requires 0 < y <= 1");
  if (!(z > 0)) throw std::domain_error("concentration_f requires z > 0");

  // e^z - 1 and 1 - e^-z via expm1 so small z keeps full precision; the
  // exponents only ever go negative, so underflow to 0 is benign while
  // overflow cannot happen.
  const double up = std::expm1(z);    // e^z - 1
  const double down = -std::expm1(-z);  // 1 - e^-z
  const double t_upper = -x * y * up * up / (2.0 + up);
  const double t_lower = -x * y * down * down / 2.0;

  // 1 - (1-y)^x, evaluated as -expm1(x*log1p(-y)) so that huge x with tiny
  // y does not collapse to 0/0. y == 1 makes log1p(-1) = -inf and the
  // denominator exactly 1.
  double denom;
  if (y == 1.0) {
    denom = 1.0;
  } else {
    denom = -std::expm1(x * std::log1p(-y));
  }
  return (std::exp(t_upper) + std::exp(t_lower)) / denom;
}

BinGrid::BinGrid(Interval support, int bin_count)
    : support_(support), m_(bin_count) {
  if (bin_count < 1) throw std::invalid_argument("bin count must be >= 1");
  w_ = support_.width() / bin_count;
  inv_w_ = bin_count / support_.width();
}

int BinGrid::index_of(double z) const {
  if (!support_.contains(z)) {
    throw std::domain_error("sample outside the declared support");
  }
  int j = static_cast<int>((z - support_.lo) * inv_w_);
  if (j >= m_) j = m_ - 1;  // z == hi lands in the (closed) last bin
  return j;
}

bool HistogramPair::has_empty_bin() const {
  for (std::size_t j = 0; j < counts_p.size(); ++j) {
    if (counts_p[j] == 0 || counts_q[j] == 0) return true;
  }
  return false;
}

HistogramPair count_histogram(const BinGrid& grid,
                              std::span<const double> samples_p,
                              std::span<const double> samples_q) {
  if (samples_p.size() != samples_q.size()) {
    throw std::invalid_argument("both sides must contribute the same sample count");
  }
  HistogramPair hist;
  hist.n = samples_p.size();
  hist.counts_p.assign(grid.bin_count(), 0);
  hist.counts_q.assign(grid.bin_count(), 0);
  for (double z : samples_p) ++hist.counts_p[grid.index_of(z)];
  for (double z : samples_q) ++hist.counts_q[grid.index_of(z)];
  return hist;
}

std::uint64_t min_n_satisfying(const std::function<bool(std::uint64_t)>& predicate,
                               std::uint64_t cap) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (predicate(1)) return 1;

  // Double until the predicate flips, then bisect on (lo, hi].
  std::uint64_t lo = 1;  // known false
  std::uint64_t hi = 2;
  while (hi < cap && !predicate(hi)) {
    lo = hi;
    hi = hi > cap / 2 ? cap : hi * 2;
  }
  if (hi >= cap && !predicate(cap)) {
    throw InfeasibleError("no sample count up to " + std::to_string(cap) +
                          " satisfies the plan inequality");
  }
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    if (predicate(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

namespace {
constexpr std::size_t kStreamChunk = 1 << 16;
}

std::vector<std::uint64_t> sampled_bin_counts(const Mechanism& mechanism,
                                              double x, std::uint64_t n,
                                              std::uint64_t side_seed,
                                              const BinGrid& grid) {
  std::vector<std::uint64_t> counts(grid.bin_count(), 0);
  std::vector<double> buffer(kStreamChunk);
  std::uint64_t remaining = n;
  std::uint64_t chunk_index = 0;
  while (remaining > 0) {
    const std::size_t take = static_cast<std::size_t>(
        remaining < kStreamChunk ? remaining : kStreamChunk);
    mechanism.sample(x, take, child_seed(side_seed, chunk_index), buffer);
    for (std::size_t i = 0; i < take; ++i) ++counts[grid.index_of(buffer[i])];
    remaining -= take;
    ++chunk_index;
  }
  return counts;
}

std::vector<std::uint64_t> sampled_category_counts(const Mechanism& mechanism,
                                                   double x, std::uint64_t n,
                                                   std::uint64_t side_seed,
                                                   int categories) {
  std::vector<std::uint64_t> counts(categories, 0);
  std::vector<double> buffer(kStreamChunk);
  std::uint64_t remaining = n;
  std::uint64_t chunk_index = 0;
  while (remaining > 0) {
    const std::size_t take = static_cast<std::size_t>(
        remaining < kStreamChunk ? remaining : kStreamChunk);
    mechanism.sample(x, take, child_seed(side_seed, chunk_index), buffer);
    for (std::size_t i = 0; i < take; ++i) {
      const int z = static_cast<int>(buffer[i]);
      if (z < 0 || z >= categories || buffer[i] != z) {
        throw std::domain_error("sample outside the declared category set");
      }
      ++counts[z];
    }
    remaining -= take;
    ++chunk_index;
  }
  return counts;
}

}  // namespace epsaudit
