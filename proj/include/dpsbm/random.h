// Copyright 2026 The dpsbm Authors.
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

// Seeding conventions. Every randomized operation takes one explicit 64-bit
// seed and builds its own engine from it; sub-streams are derived with
// DeriveSeed so that results never depend on call order across threads.

#ifndef DPSBM_RANDOM_H_
#define DPSBM_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace dpsbm {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
inline constexpr uint64_t MixBits(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic child seed for stream `index` under `parent`.
inline constexpr uint64_t DeriveSeed(uint64_t parent, uint64_t index) {
  return MixBits(MixBits(parent) ^ MixBits(index + 0x632be59bd9b4e019ULL));
}

inline Rng MakeRng(uint64_t seed) {
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32)};
  return Rng(seq);
}

// Uniform double in [0, 1) built from the top 53 bits of one engine draw.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform double in (0, 1).
inline double UniformOpenUnit(Rng& rng) {
  double u = 0.0;
  do {
    u = UniformUnit(rng);
  } while (u == 0.0);
  return u;
}

inline double StandardNormal(Rng& rng) {
  // Marsaglia polar method; one accepted pair yields one draw so that the
  // number of engine calls per draw does not depend on hidden caches.
  while (true) {
    const double u = 2.0 * UniformUnit(rng) - 1.0;
    const double v = 2.0 * UniformUnit(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

// Fills `out` with a uniformly distributed point on the unit sphere.
// Returns false only if every coordinate drew exactly zero.
inline bool FillUniformUnitVector(Rng& rng, std::span<double> out) {
  double norm_sq = 0.0;
  for (double& x : out) {
    x = StandardNormal(rng);
    norm_sq += x * x;
  }
  if (norm_sq == 0.0) return false;
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& x : out) x *= inv;
  return true;
}

}  // namespace dpsbm

#endif  // DPSBM_RANDOM_H_
