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

#ifndef EPSAUDIT_CORE_INTERVAL_HPP_
#define EPSAUDIT_CORE_INTERVAL_HPP_

#include <cmath>
#include <stdexcept>

namespace epsaudit {

// A closed interval [lo, hi] with strictly positive width. Both the secret
// domain and the output domain of every continuous mechanism are intervals
// of this kind.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_in, double hi_in) : lo(lo_in), hi(hi_in) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
      throw std::invalid_argument("interval requires finite lo < hi");
    }
  }

  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_INTERVAL_HPP_
