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

// Closed-form accuracy bounds for the two-community SBM mechanisms.
// Logs are natural. Infeasible evaluations (a non-positive denominator)
// return std::nullopt.

#ifndef DPSBM_BOUNDS_H_
#define DPSBM_BOUNDS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dpsbm/internal/status_macros.h"
#include "dpsbm/mechanisms.h"

namespace dpsbm {

// Constants the concentration inequalities leave unspecified.
struct UniversalConstants {
  double c_laplacian = 1.0;
  double c_rr = 1.0;
  double c_sub = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  // Coefficient of the 1/sqrt(m) term in the subsampling overlap floor.
  double c_overlap_sub = 1.0;

  absl::Status Validate() const {
    for (double c : {c_laplacian, c_rr, c_sub, c1, c2, c_overlap_sub}) {
      if (!(c > 0.0)) {
        return absl::InvalidArgumentError("universal constants must be > 0");
      }
    }
    return absl::OkStatus();
  }
};

struct AccuracyTarget {
  double beta = 0.05;  // tolerated error rate
  double eta = 0.01;   // failure probability

  absl::Status Validate() const {
    if (!(beta > 0.0 && beta < 0.125)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("beta must lie in (0, 1/8), got %g", beta));
    }
    if (!(eta > 0.0 && eta < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("eta must lie in (0, 1), got %g", eta));
    }
    return absl::OkStatus();
  }
};

// p = alpha log(n) / n, q = beta log(n) / n.
struct SbmLogScale {
  double alpha = 0.0;
  double beta = 0.0;

  static SbmLogScale FromParams(int n, double p, double q) {
    const double ln = std::log(static_cast<double>(n));
    return {n * p / ln, n * q / ln};
  }
};

namespace internal {

inline absl::Status CheckAssortative(double p, double q) {
  if (!(0.0 <= q && q < p && p <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need 0 <= q < p <= 1, got p=%g q=%g", p, q));
  }
  return absl::OkStatus();
}

}  // namespace internal

// ---------------------------------------------------------------------------
// Converse: the smallest n at which (beta, eta)-accurate eps-edge-DP
// recovery is not ruled out.

enum class ConverseForm {
  // Root of 8 beta (1 - 8 beta) Delta n^2 - 2 beta A n - B = 0.
  kExactRoot,
  // The same expression without the factor beta under the square root.
  kUnscaledDiscriminant,
};

enum class ConverseLogTerm {
  kEBeta,          // A = log(1 / (8 e beta))
  kExpBeta,        // A = log(1 / (8 e^beta))
};

struct ConverseOptions {
  ConverseForm form = ConverseForm::kExactRoot;
  ConverseLogTerm log_term = ConverseLogTerm::kEBeta;
};

struct ConverseTerms {
  double delta_term;  // e^{2 eps} + (1 - e^{2 eps})(p^2 + q^2) - 1
  double a;
  double b;
};

inline absl::StatusOr<ConverseTerms> ConverseTermsFor(
    const AccuracyTarget& target, double eps, double p, double q,
    ConverseLogTerm log_term = ConverseLogTerm::kEBeta) {
  DPSBM_RETURN_IF_ERROR(target.Validate());
  DPSBM_RETURN_IF_ERROR(internal::CheckAssortative(p, q));
  if (!(eps > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("eps must be positive, got %g", eps));
  }
  const double e2 = std::exp(2.0 * eps);
  ConverseTerms t;
  t.delta_term = e2 + (1.0 - e2) * (p * p + q * q) - 1.0;
  t.a = log_term == ConverseLogTerm::kEBeta
            ? std::log(1.0 / (8.0 * std::numbers::e * target.beta))
            : std::log(1.0 / (8.0 * std::exp(target.beta)));
  t.b = std::log(1.0 / target.eta);
  return t;
}

// Right-hand side of the necessary condition at n, for root checks.
inline double ConverseConditionRhs(const ConverseTerms& t, double beta,
                                   double n) {
  const double m = n - 8.0 * beta * n;
  return t.a / (4.0 * m) + t.b / (8.0 * beta * n * m);
}

inline absl::StatusOr<std::optional<double>> ConverseMinN(
    const AccuracyTarget& target, double eps, double p, double q,
    const ConverseOptions& options = {}) {
  DPSBM_ASSIGN_OR_RETURN(const ConverseTerms t,
                         ConverseTermsFor(target, eps, p, q, options.log_term));
  if (!(t.delta_term > 0.0)) return std::optional<double>();
  const double beta = target.beta;
  const double k = 1.0 - 8.0 * beta;
  const double disc_coeff =
      options.form == ConverseForm::kExactRoot ? 8.0 * beta * k : 8.0 * k;
  const double disc =
      beta * beta * t.a * t.a + disc_coeff * t.delta_term * t.b;
  return std::optional<double>((beta * t.a + std::sqrt(disc)) /
                               (8.0 * beta * k * t.delta_term));
}

// ---------------------------------------------------------------------------
// Randomized response.

// Bound on ||u2 - u2_hat|| for the perturbed Laplacian.
inline absl::StatusOr<double> RrDistanceBound(int n, double p, double q,
                                              double eps, double eta) {
  DPSBM_RETURN_IF_ERROR(internal::CheckAssortative(p, q));
  if (n < 1 || !(eps > 0.0) || !(eta > 0.0 && eta < 1.0)) {
    return absl::InvalidArgumentError("need n >= 1, eps > 0, eta in (0, 1)");
  }
  const double mu = FlipProbability(eps);
  const double dn = static_cast<double>(n);
  const double l = std::log(2.0 / eta);
  return 4.0 * std::sqrt(2.0) / (dn * (p - q)) *
         (q * dn + std::sqrt(8.0 * mu * (1.0 - mu) * dn * l) +
          4.0 / (3.0 * std::sqrt(dn)) * l);
}

struct SeparationResult {
  bool ok = false;
  double margin = 0.0;  // left side minus right side
};

inline absl::StatusOr<SeparationResult> RrSeparation(
    int n, double p, double q, double eps, double eta,
    const UniversalConstants& consts = {}) {
  DPSBM_RETURN_IF_ERROR(consts.Validate());
  if (n < 2 || !(eps > 0.0) || !(eta > 0.0 && eta < 1.0) ||
      !(0.0 <= q && q <= p && p <= 1.0)) {
    return absl::InvalidArgumentError(
        "need n >= 2, eps > 0, eta in (0, 1), 0 <= q <= p <= 1");
  }
  const double mu = FlipProbability(eps);
  const double dn = static_cast<double>(n);
  const double l = std::log(dn / eta);
  const double tau = std::sqrt(dn * p * l) + l;
  const double c = 4.0 * std::max(2.0 * consts.c_laplacian, consts.c_rr);
  const double rhs =
      c * (tau + dn / std::sqrt(2.0) * std::sqrt(mu * (1.0 - mu)) *
                     std::sqrt(l));
  SeparationResult r;
  r.margin = dn * (p - q) - rhs;
  r.ok = r.margin >= 0.0;
  return r;
}

// ---------------------------------------------------------------------------
// Subsampling.

enum class SubsampleVariance {
  kInterEdges,   // (16/n) q_s (1 - q_s) |E_inter|
  kUpperBound,   // (4/n) (q / (p + q)) |E|
};

inline absl::StatusOr<double> SubsampleDistanceBound(
    int n, double p, double q, double q_s, int64_t edge_count,
    int64_t inter_edge_count, double eta,
    SubsampleVariance variance = SubsampleVariance::kInterEdges) {
  DPSBM_RETURN_IF_ERROR(internal::CheckAssortative(p, q));
  if (n < 1 || !(q_s > 0.0 && q_s <= 1.0) || !(eta > 0.0 && eta < 1.0) ||
      edge_count < 0 || inter_edge_count < 0) {
    return absl::InvalidArgumentError(
        "need n >= 1, q_s in (0, 1], eta in (0, 1), non-negative counts");
  }
  const double dn = static_cast<double>(n);
  const double sqrt_n = std::sqrt(dn);
  const double e = static_cast<double>(edge_count);
  const double d_norm = 2.0 * q_s / sqrt_n * std::sqrt(q / (p + q) * e);
  const double var =
      variance == SubsampleVariance::kInterEdges
          ? 16.0 / dn * q_s * (1.0 - q_s) *
                static_cast<double>(inter_edge_count)
          : 4.0 / dn * (q / (p + q)) * e;
  const double summand = 4.0 / sqrt_n;
  const double l = std::log(2.0 / eta);
  return 4.0 * std::sqrt(2.0) / (dn * (p - q)) *
         (d_norm + std::sqrt(2.0 * var * l) + summand / 3.0 * l);
}

// ---------------------------------------------------------------------------
// Noisy power iteration.

// 1 / ((p - q) n / 3 - 2 c1 sqrt(log n)); nullopt when not positive.
inline std::optional<double> GapReciprocalBound(
    int n, double p, double q, const UniversalConstants& consts = {}) {
  const double dn = static_cast<double>(n);
  const double denom =
      (p - q) * dn / 3.0 - 2.0 * consts.c1 * std::sqrt(std::log(dn));
  if (!(denom > 0.0)) return std::nullopt;
  return 1.0 / denom;
}

inline absl::StatusOr<std::optional<double>> NpiDistanceBound(
    int n, double p, double q, double sigma, int n_steps, double eta,
    const UniversalConstants& consts = {}) {
  DPSBM_RETURN_IF_ERROR(consts.Validate());
  DPSBM_RETURN_IF_ERROR(internal::CheckAssortative(p, q));
  if (n < 2 || !(sigma >= 0.0) || n_steps < 1 || !(eta > 0.0 && eta < 1.0)) {
    return absl::InvalidArgumentError(
        "need n >= 2, sigma >= 0, N >= 1, eta in (0, 1)");
  }
  const std::optional<double> inv_gap = GapReciprocalBound(n, p, q, consts);
  if (!inv_gap.has_value()) return std::optional<double>();
  const double dn = static_cast<double>(n);
  const double numer =
      std::sqrt(2.0) * sigma * (1.0 + 1.0 / dn) *
      (std::sqrt(dn) + std::sqrt(2.0 * std::log(2.0 * n_steps / eta)));
  return std::optional<double>(numer * *inv_gap);
}

struct SpectralGapBounds {
  double lambda1_lower;
  double lambda_rest_upper;
  // May be negative when n is too small for the statement to be informative.
  double success_probability_raw;
  double success_probability;  // clamped to [0, 1]
};

inline absl::StatusOr<SpectralGapBounds> SpectralGapBound(
    const SbmLogScale& scale, int n, const UniversalConstants& consts = {}) {
  DPSBM_RETURN_IF_ERROR(consts.Validate());
  if (!(scale.alpha > scale.beta && scale.beta > 0.0) || n < 2) {
    return absl::InvalidArgumentError(
        "need alpha > beta > 0 and n >= 2");
  }
  const double dn = static_cast<double>(n);
  const double ln = std::log(dn);
  SpectralGapBounds b;
  b.lambda1_lower = (scale.alpha - scale.beta) / 3.0 * ln;
  b.lambda_rest_upper = 2.0 * consts.c1 * std::sqrt(ln);
  b.success_probability_raw =
      1.0 -
      2.0 * std::pow(dn, -1.0 / (2.0 * (scale.alpha + scale.beta + 1.0))) -
      consts.c2 * std::pow(dn, -3.0);
  b.success_probability = std::clamp(b.success_probability_raw, 0.0, 1.0);
  return b;
}

// ---------------------------------------------------------------------------
// Overlap floors from eigenvector distance bounds.

enum class BoundMechanism { kRr, kSubsample, kNpi };

inline absl::StatusOr<double> OverlapLowerBound(
    double distance, BoundMechanism mechanism,
    std::optional<int64_t> m = std::nullopt,
    const UniversalConstants& consts = {}) {
  if (!(distance >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("distance bound must be >= 0, got %g", distance));
  }
  double v = 0.0;
  switch (mechanism) {
    case BoundMechanism::kRr:
      v = 1.0 - distance / 8.0;
      break;
    case BoundMechanism::kSubsample:
      if (!m.has_value() || *m < 1) {
        return absl::InvalidArgumentError(
            "subsampling overlap floor needs the subgraph count m");
      }
      v = 1.0 - distance / 4.0 -
          consts.c_overlap_sub / std::sqrt(static_cast<double>(*m));
      break;
    case BoundMechanism::kNpi:
      v = 1.0 - distance * distance / 8.0;
      break;
  }
  return std::max(0.0, v);
}

}  // namespace dpsbm

#endif  // DPSBM_BOUNDS_H_
