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
// Seeding contract used throughout the toolkit: every experiment has one
// root seed, and every independent sampling stream (a side of a pair, a
// grid pair, a repetition) draws its own child seed via child_seed(root,
// index). Child derivation is a pure function, so parallel schedules and
// sequential schedules produce byte-identical streams.

#ifndef EPSAUDIT_CORE_RNG_HPP_
#define EPSAUDIT_CORE_RNG_HPP_

#include <cstdint>

namespace epsaudit {

// SplitMix64 finalizer (Steele, Lea, Flood). Used for seeding and for the
// child-seed scheme; not used as a sampling generator itself.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child seed i of a root seed. Defined as two SplitMix64 steps from
// root + (i+1)*phi so that random access is O(1) and children of distinct
// indices are decorrelated.
inline std::uint64_t child_seed(std::uint64_t root, std::uint64_t index) {
  std::uint64_t state = root + (index + 1) * 0x9E3779B97F4A7C15ULL;
  (void)splitmix64(state);
  return splitmix64(state);
}

// xoshiro256++ (Blackman, Vigna). Small, fast, and identical output on
// every platform, which the reproducibility tests rely on.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    // Seed expansion via SplitMix64, as recommended by the authors.
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform double on the open interval (0,1). Never returns 0 or 1, so
  // inverse-CDF sampling stays clear of the endpoint singularities.
  double uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) by rejection-free multiply-shift.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire's multiplication trick; bias < 2^-64 * bound, negligible for
    // the small category counts used here.
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace epsaudit

#endif  // EPSAUDIT_CORE_RNG_HPP_
