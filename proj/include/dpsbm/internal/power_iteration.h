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

#ifndef DPSBM_INTERNAL_POWER_ITERATION_H_
#define DPSBM_INTERNAL_POWER_ITERATION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "dpsbm/matrix.h"
#include "dpsbm/random.h"

namespace dpsbm::internal {

// Power iteration on M = sign * S + shift * I restricted to the orthogonal
// complement of `deflate` (an orthonormal set). The caller picks `shift` so
// that the wanted eigenvalue of M is the largest in magnitude on that
// subspace.
struct PowerProblem {
  const SymmetricMatrix* matrix = nullptr;
  double sign = 1.0;  // +1 or -1
  double shift = 0.0;
  std::span<const std::vector<double>> deflate;
};

struct PowerOutcome {
  std::vector<double> vector;
  double theta = 0.0;     // Rayleigh quotient of M
  double residual = 0.0;  // ||P M v - theta v||
  int iterations = 0;
  bool converged = false;
};

inline PowerOutcome RunPowerIteration(const PowerProblem& problem,
                                      double residual_tol, int max_iters,
                                      uint64_t seed) {
  const int n = problem.matrix->size();
  PowerOutcome out;
  std::vector<double> v(n), w(n);

  // Start vector: random unit vector with the deflated directions removed.
  // Redrawn from a fresh stream if the projection is numerically empty.
  for (uint64_t attempt = 0;; ++attempt) {
    Rng rng = MakeRng(DeriveSeed(seed, attempt));
    FillUniformUnitVector(rng, v);
    ProjectOut(problem.deflate, v);
    const double norm = Norm2(v);
    if (norm > 1e-12 || attempt >= 16) {
      for (double& x : v) x /= norm;
      break;
    }
  }

  for (int it = 1; it <= max_iters; ++it) {
    problem.matrix->Multiply(v, w);
    for (int i = 0; i < n; ++i) w[i] = problem.sign * w[i] + problem.shift * v[i];
    ProjectOut(problem.deflate, w);
    const double theta = Dot(v, w);
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = w[i] - theta * v[i];
      r2 += r * r;
    }
    out.theta = theta;
    out.residual = std::sqrt(r2);
    out.iterations = it;
    if (out.residual <= residual_tol) {
      out.converged = true;
      break;
    }
    const double norm = Norm2(w);
    if (norm == 0.0) break;
    for (int i = 0; i < n; ++i) v[i] = w[i] / norm;
  }
  out.vector = std::move(v);
  return out;
}

}  // namespace dpsbm::internal

#endif  // DPSBM_INTERNAL_POWER_ITERATION_H_
