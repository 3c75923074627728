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

// Eigen-solvers used by the clustering mechanisms and the flip-invariant
// accuracy metrics.
//
// The solvers are shifted, deflated power iterations with re-orthogonalization
// of every iterate. The shift makes the wanted eigenvalue dominant:
//
//   Fiedler pair of L:   iterate on (c I - L) restricted to 1-perp,
//                        c = 2 * max_degree + 1 (Gershgorin bound + 1).
//   Top pairs of S:      iterate on (S + s I), s = max absolute row sum;
//                        the second pair is computed on u1-perp.
//
// Convergence is declared when ||M v - theta v|| <= tol * shift. Under
// EigenMethod::kAuto a stalled iteration (tiny relative gap) falls back to
// a dense tridiagonal QL decomposition, and the diagnostics record it.

#ifndef DPSBM_SPECTRAL_H_
#define DPSBM_SPECTRAL_H_

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dpsbm/graph.h"
#include "dpsbm/internal/power_iteration.h"
#include "dpsbm/internal/status_macros.h"
#include "dpsbm/internal/symmetric_eigen.h"
#include "dpsbm/matrix.h"

namespace dpsbm {

enum class EigenMethod {
  kAuto,   // power iteration, dense fallback if it does not converge
  kPower,  // power iteration only; non-convergence is an error
  kDense,  // dense tridiagonal QL
};

struct SolverConfig {
  double tol = 1e-10;
  // Defaults to 10 n + 1000 when unset.
  std::optional<int> max_iters;
  // Seeds the power-iteration start vector.
  uint64_t seed = 0x5eedULL;
  EigenMethod method = EigenMethod::kAuto;
  // First coordinate with |x| > kSignEpsilon is made positive.
  bool canonicalize_sign = true;

  absl::Status Validate() const {
    if (!(tol > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("tol must be positive, got %g", tol));
    }
    if (max_iters.has_value() && *max_iters < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("max_iters must be >= 1, got %d", *max_iters));
    }
    return absl::OkStatus();
  }

  int MaxIters(int n) const { return max_iters.value_or(10 * n + 1000); }
};

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;  // unit norm
};

struct EigenDiagnostics {
  int iterations = 0;
  double residual = 0.0;  // ||M v - value v|| for the returned pair
  double shift = 0.0;     // spectral shift used by the power iteration
  bool degenerate = false;
  EigenMethod method_used = EigenMethod::kPower;
};

struct FiedlerResult {
  EigenPair pair;
  EigenDiagnostics diagnostics;
};

struct TopTwoResult {
  EigenPair first;   // largest eigenvalue
  EigenPair second;  // second largest
  EigenDiagnostics first_diagnostics;
  EigenDiagnostics second_diagnostics;
  // |lambda1 - lambda2| < tol * |lambda1|.
  bool near_degenerate_gap = false;
};

inline constexpr double kSignEpsilon = 1e-12;

inline void CanonicalizeSign(std::span<double> v) {
  for (double x : v) {
    if (std::abs(x) > kSignEpsilon) {
      if (x < 0) {
        for (double& y : v) y = -y;
      }
      return;
    }
  }
}

namespace internal {

// Deterministic unit vector orthogonal to 1: (e_0 - e_1) / sqrt(2).
inline std::vector<double> CanonicalBalancedVector(int n) {
  std::vector<double> v(n, 0.0);
  if (n >= 2) {
    v[0] = 1.0 / std::sqrt(2.0);
    v[1] = -1.0 / std::sqrt(2.0);
  } else if (n == 1) {
    v[0] = 1.0;
  }
  return v;
}

inline double Residual(const SymmetricMatrix& m, std::span<const double> v,
                       double value) {
  std::vector<double> w(v.size());
  m.Multiply(v, w);
  double r2 = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double r = w[i] - value * v[i];
    r2 += r * r;
  }
  return std::sqrt(r2);
}

inline absl::Status NotConverged(absl::string_view what, int iterations,
                                 double residual) {
  return absl::AbortedError(absl::StrFormat(
      "%s: power iteration did not converge in %d iterations "
      "(final residual %.3e)",
      what, iterations, residual));
}

}  // namespace internal

// Second-smallest eigenpair (lambda_2, u_2) of a graph Laplacian.
inline absl::StatusOr<FiedlerResult> FiedlerVector(const Laplacian& laplacian,
                                                   const SolverConfig& cfg) {
  DPSBM_RETURN_IF_ERROR(cfg.Validate());
  const int n = laplacian.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Fiedler vector needs n >= 2, got %d", n));
  }
  FiedlerResult result;
  const double c = 2.0 * laplacian.max_degree() + 1.0;
  result.diagnostics.shift = c;

  if (laplacian.max_degree() == 0) {
    result.pair.value = 0.0;
    result.pair.vector = internal::CanonicalBalancedVector(n);
    result.diagnostics.degenerate = true;
    return result;
  }

  const double tol_abs = cfg.tol * c;
  if (cfg.method != EigenMethod::kDense) {
    const std::vector<std::vector<double>> ones = {
        std::vector<double>(n, 1.0 / std::sqrt(static_cast<double>(n)))};
    internal::PowerProblem problem{&laplacian.matrix(), -1.0, c, ones};
    internal::PowerOutcome out = internal::RunPowerIteration(
        problem, tol_abs, cfg.MaxIters(n), cfg.seed);
    if (out.converged) {
      result.pair.value = c - out.theta;
      result.pair.vector = std::move(out.vector);
      result.diagnostics.iterations = out.iterations;
      result.diagnostics.residual = out.residual;
      result.diagnostics.method_used = EigenMethod::kPower;
      // lambda_2 == 0 means a disconnected graph: 0 has multiplicity > 1.
      result.diagnostics.degenerate = result.pair.value <= tol_abs;
      if (cfg.canonicalize_sign) CanonicalizeSign(result.pair.vector);
      return result;
    }
    if (cfg.method == EigenMethod::kPower) {
      return internal::NotConverged("FiedlerVector", out.iterations,
                                    out.residual);
    }
    result.diagnostics.iterations = out.iterations;
  }

  // Dense route: L + c 11^T / n moves the constant vector to the top of the
  // spectrum, leaving lambda_2 as the smallest eigenvalue.
  SymmetricMatrix shifted = laplacian.matrix();
  const double bump = c / n;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) shifted.Set(i, j, shifted(i, j) + bump);
  }
  DPSBM_ASSIGN_OR_RETURN(internal::DenseEigenSystem sys,
                         internal::SymmetricEigen(shifted));
  result.pair.value = sys.values[0];
  result.pair.vector = std::move(sys.vectors[0]);
  result.diagnostics.method_used = EigenMethod::kDense;
  result.diagnostics.degenerate =
      n > 2 && std::abs(sys.values[1] - sys.values[0]) <= tol_abs;
  if (cfg.canonicalize_sign) CanonicalizeSign(result.pair.vector);
  result.diagnostics.residual = internal::Residual(
      laplacian.matrix(), result.pair.vector, result.pair.value);
  return result;
}

namespace internal {

inline absl::StatusOr<TopTwoResult> TopTwoDense(const SymmetricMatrix& s,
                                                const SolverConfig& cfg,
                                                double shift,
                                                int iterations_spent) {
  const int n = s.size();
  DPSBM_ASSIGN_OR_RETURN(DenseEigenSystem sys, SymmetricEigen(s));
  TopTwoResult r;
  r.first.value = sys.values[n - 1];
  r.first.vector = std::move(sys.vectors[n - 1]);
  r.second.value = sys.values[n - 2];
  r.second.vector = std::move(sys.vectors[n - 2]);
  for (EigenPair* p : {&r.first, &r.second}) {
    if (cfg.canonicalize_sign) CanonicalizeSign(p->vector);
  }
  r.first_diagnostics = {iterations_spent, Residual(s, r.first.vector,
                                                    r.first.value),
                         shift, false, EigenMethod::kDense};
  r.second_diagnostics = {0, Residual(s, r.second.vector, r.second.value),
                          shift, false, EigenMethod::kDense};
  return r;
}

inline void FlagGap(const SolverConfig& cfg, TopTwoResult& r) {
  r.near_degenerate_gap = std::abs(r.first.value - r.second.value) <
                          cfg.tol * std::abs(r.first.value);
  r.first_diagnostics.degenerate = r.near_degenerate_gap;
  r.second_diagnostics.degenerate = r.near_degenerate_gap;
}

}  // namespace internal

// Largest eigenpair of a symmetric matrix.
inline absl::StatusOr<FiedlerResult> DominantEigenpair(
    const SymmetricMatrix& s, const SolverConfig& cfg) {
  DPSBM_RETURN_IF_ERROR(cfg.Validate());
  const int n = s.size();
  if (n < 1) return absl::InvalidArgumentError("empty matrix");
  FiedlerResult r;
  const double shift = s.MaxAbsRowSum();
  r.diagnostics.shift = shift;
  if (shift == 0.0) {
    r.pair.value = 0.0;
    r.pair.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    r.diagnostics.degenerate = n > 1;
    return r;
  }
  if (cfg.method != EigenMethod::kDense) {
    internal::PowerProblem problem{&s, 1.0, shift, {}};
    internal::PowerOutcome out = internal::RunPowerIteration(
        problem, cfg.tol * shift, cfg.MaxIters(n), cfg.seed);
    if (out.converged) {
      r.pair.value = out.theta - shift;
      r.pair.vector = std::move(out.vector);
      r.diagnostics.iterations = out.iterations;
      r.diagnostics.residual = out.residual;
      if (cfg.canonicalize_sign) CanonicalizeSign(r.pair.vector);
      return r;
    }
    if (cfg.method == EigenMethod::kPower) {
      return internal::NotConverged("DominantEigenpair", out.iterations,
                                    out.residual);
    }
  }
  DPSBM_ASSIGN_OR_RETURN(internal::DenseEigenSystem sys,
                         internal::SymmetricEigen(s));
  r.pair.value = sys.values[n - 1];
  r.pair.vector = std::move(sys.vectors[n - 1]);
  if (cfg.canonicalize_sign) CanonicalizeSign(r.pair.vector);
  r.diagnostics.method_used = EigenMethod::kDense;
  r.diagnostics.residual = internal::Residual(s, r.pair.vector, r.pair.value);
  return r;
}

// Two largest eigenpairs of a symmetric matrix.
inline absl::StatusOr<TopTwoResult> TopTwoEigenpairs(const SymmetricMatrix& s,
                                                     const SolverConfig& cfg) {
  DPSBM_RETURN_IF_ERROR(cfg.Validate());
  const int n = s.size();
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrFormat("two eigenpairs need n >= 2, got %d", n));
  }
  const double shift = s.MaxAbsRowSum();
  if (shift == 0.0) {
    TopTwoResult r;
    r.first.vector.assign(n, 1.0 / std::sqrt(static_cast<double>(n)));
    r.second.vector = internal::CanonicalBalancedVector(n);
    r.first_diagnostics.degenerate = r.second_diagnostics.degenerate = true;
    r.near_degenerate_gap = true;
    return r;
  }
  if (cfg.method == EigenMethod::kDense) {
    DPSBM_ASSIGN_OR_RETURN(TopTwoResult r,
                           internal::TopTwoDense(s, cfg, shift, 0));
    internal::FlagGap(cfg, r);
    return r;
  }

  const double tol_abs = cfg.tol * shift;
  const int max_iters = cfg.MaxIters(n);
  internal::PowerProblem first_problem{&s, 1.0, shift, {}};
  internal::PowerOutcome first =
      internal::RunPowerIteration(first_problem, tol_abs, max_iters, cfg.seed);
  internal::PowerOutcome second;
  if (first.converged) {
    const std::vector<std::vector<double>> basis = {first.vector};
    internal::PowerProblem second_problem{&s, 1.0, shift, basis};
    second = internal::RunPowerIteration(second_problem, tol_abs, max_iters,
                                         DeriveSeed(cfg.seed, 1));
  }
  if (!first.converged || !second.converged) {
    if (cfg.method == EigenMethod::kPower) {
      const auto& bad = first.converged ? second : first;
      return internal::NotConverged("TopTwoEigenpairs", bad.iterations,
                                    bad.residual);
    }
    DPSBM_ASSIGN_OR_RETURN(
        TopTwoResult r,
        internal::TopTwoDense(s, cfg, shift,
                              first.iterations + second.iterations));
    internal::FlagGap(cfg, r);
    return r;
  }

  TopTwoResult r;
  r.first.value = first.theta - shift;
  r.first.vector = std::move(first.vector);
  r.second.value = second.theta - shift;
  r.second.vector = std::move(second.vector);
  r.first_diagnostics = {first.iterations, first.residual, shift, false,
                         EigenMethod::kPower};
  r.second_diagnostics = {second.iterations, second.residual, shift, false,
                          EigenMethod::kPower};
  if (cfg.canonicalize_sign) {
    CanonicalizeSign(r.first.vector);
    CanonicalizeSign(r.second.vector);
  }
  internal::FlagGap(cfg, r);
  return r;
}

inline absl::StatusOr<TopTwoResult> TopTwoEigenpairs(
    const CenteredAdjacency& b, const SolverConfig& cfg) {
  return TopTwoEigenpairs(b.matrix(), cfg);
}

// Sign rule: entries <= 0 map to +1, entries > 0 map to -1.
inline absl::StatusOr<LabelVector> LabelsFromVector(
    std::span<const double> v) {
  bool any_nonzero = false;
  std::vector<int> labels(v.size());
  for (size_t i = 0; i < v.size(); ++i) {
    any_nonzero |= v[i] != 0.0;
    labels[i] = v[i] <= 0.0 ? 1 : -1;
  }
  if (!any_nonzero) {
    return absl::InvalidArgumentError(
        "cannot extract labels from an all-zero vector");
  }
  return LabelVector::Create(std::move(labels));
}

// (1/n) min(Ham(est, truth), Ham(-est, truth)).
inline absl::StatusOr<double> ErrorRate(const LabelVector& estimate,
                                        const LabelVector& truth) {
  if (estimate.size() != truth.size()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("length mismatch: %d vs %d", estimate.size(),
                        truth.size()));
  }
  const int n = truth.size();
  if (n == 0) return 0.0;
  int mismatches = 0;
  for (int i = 0; i < n; ++i) mismatches += estimate[i] != truth[i];
  return static_cast<double>(std::min(mismatches, n - mismatches)) / n;
}

inline absl::StatusOr<double> OverlapRate(const LabelVector& estimate,
                                          const LabelVector& truth) {
  DPSBM_ASSIGN_OR_RETURN(double err, ErrorRate(estimate, truth));
  return 1.0 - err;
}

}  // namespace dpsbm

#endif  // DPSBM_SPECTRAL_H_
