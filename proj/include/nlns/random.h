// Copyright 2026 The NLNS Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLNS_RANDOM_H_
#define NLNS_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace nlns {

// All stochastic code draws from this engine. The helpers below derive
// values from raw engine output so results do not depend on the standard
// library's distribution implementations.
using Rng = std::mt19937_64;

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed for the run of instance `index` under top-level seed `seed`.
inline uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return SplitMix64(seed ^ index);
}

// Uniform double in [0, 1).
inline double UniformDouble(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1).
inline double UniformOpen(Rng& rng) {
  return (static_cast<double>(rng() >> 12) + 0.5) * 0x1.0p-52;
}

// Uniform integer in [0, n). Rejection sampling, unbiased.
inline int UniformInt(Rng& rng, int n) {
  const uint64_t range = static_cast<uint64_t>(n);
  const uint64_t limit = UINT64_MAX - UINT64_MAX % range;
  uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return static_cast<int>(r % range);
}

inline bool Bernoulli(Rng& rng, double p) { return UniformDouble(rng) < p; }

// Standard normal via Box-Muller.
inline double Normal(Rng& rng) {
  const double u1 = UniformOpen(rng);
  const double u2 = UniformDouble(rng);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Standard Gumbel(0, 1) draw.
inline double Gumbel(Rng& rng) { return -std::log(-std::log(UniformOpen(rng))); }

}  // namespace nlns

#endif  // NLNS_RANDOM_H_
