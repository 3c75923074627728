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

// Noise calibration for N-fold composition of Gaussian mechanisms.
//
// N releases, each with noise ratio sigma (noise scale / L2 sensitivity),
// compose to a single Gaussian mechanism with ratio s = sigma / sqrt(N).
// Its privacy curve is
//
//   delta(eps) = Phi(1/(2s) - eps s) - e^eps Phi(-1/(2s) - eps s).

#ifndef DPSBM_ACCOUNTING_H_
#define DPSBM_ACCOUNTING_H_

#include <cmath>
#include <cstdint>
#include <numbers>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dpsbm/internal/status_macros.h"
#include "dpsbm/random.h"

namespace dpsbm {

// (eps, delta) target plus the number of composed Gaussian releases.
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta = 0.0;
  int iterations = 1;

  absl::Status Validate() const {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("epsilon must be positive and finite, got %g",
                          epsilon));
    }
    if (!(delta >= 0.0 && delta < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("delta must lie in [0, 1), got %g", delta));
    }
    if (iterations < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("iterations must be >= 1, got %d", iterations));
    }
    return absl::OkStatus();
  }
};

struct GaussAccountParams {
  double sigma = 1.0;
  int n_steps = 1;

  absl::Status Validate() const {
    if (!(sigma > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("sigma must be positive, got %g", sigma));
    }
    if (n_steps < 1) {
      return absl::InvalidArgumentError(
          absl::StrFormat("n_steps must be >= 1, got %d", n_steps));
    }
    return absl::OkStatus();
  }
};

inline double StandardNormalCdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// log Phi(x), finite for all x.
inline double LogNormalCdf(double x) {
  if (x > -30.0) return std::log(StandardNormalCdf(x));
  // Mills-ratio asymptotic series.
  const double z = 1.0 / (x * x);
  const double series =
      1.0 - z * (1.0 - 3.0 * z * (1.0 - 5.0 * z * (1.0 - 7.0 * z)));
  return -0.5 * x * x - std::log(-x) -
         0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// sigma = sqrt(4 N log(1/delta)) / eps.
inline absl::StatusOr<double> SigmaBasic(double eps, double delta, int n_steps) {
  if (!(eps > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("eps must be positive, got %g", eps));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  if (n_steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("n_steps must be >= 1, got %d", n_steps));
  }
  return std::sqrt(4.0 * n_steps * std::log(1.0 / delta)) / eps;
}

inline absl::StatusOr<double> DeltaOfEpsilon(double eps,
                                             const GaussAccountParams& params) {
  DPSBM_RETURN_IF_ERROR(params.Validate());
  if (!(eps >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("eps must be non-negative, got %g", eps));
  }
  const double s = params.sigma / std::sqrt(static_cast<double>(params.n_steps));
  const double a = 0.5 / s;
  const double b = eps * s;
  const double first = StandardNormalCdf(a - b);
  const double second = std::exp(eps + LogNormalCdf(-a - b));
  const double delta = first - second;
  if (delta < 0.0) return 0.0;
  if (delta > 1.0) return 1.0;
  return delta;
}

inline constexpr double kSigmaBracketLow = 1e-6;
inline constexpr double kSigmaBracketHigh = 1e8;

// Smallest sigma in [1e-6, 1e8] with DeltaOfEpsilon(eps, sigma, N) <= delta,
// located by bisection on log(sigma). The returned value always satisfies
// the budget.
inline absl::StatusOr<double> SigmaForBudget(double eps, double delta,
                                             int n_steps) {
  if (!(eps > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("eps must be positive, got %g", eps));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("delta must lie in (0, 1), got %g", delta));
  }
  auto delta_at = [&](double sigma) {
    return DeltaOfEpsilon(eps, GaussAccountParams{sigma, n_steps});
  };
  double lo = kSigmaBracketLow;
  double hi = kSigmaBracketHigh;
  DPSBM_ASSIGN_OR_RETURN(const double d_lo, delta_at(lo));
  DPSBM_ASSIGN_OR_RETURN(const double d_hi, delta_at(hi));
  if (d_hi > delta) {
    return absl::OutOfRangeError(absl::StrFormat(
        "cannot calibrate: delta(sigma=%g) = %g exceeds target %g", hi, d_hi,
        delta));
  }
  if (d_lo <= delta) return lo;
  if (d_lo < d_hi) {
    return absl::InternalError("privacy curve not decreasing in sigma");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    DPSBM_ASSIGN_OR_RETURN(const double d_mid, delta_at(mid));
    if (d_mid <= delta) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

// One Laplace(0, scale) draw by inverting the CDF at a uniform in (0, 1).
inline double LaplaceSample(double scale, Rng& rng) {
  const double u = UniformOpenUnit(rng) - 0.5;
  const double mag = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0.0 ? -mag : mag;
}

inline absl::StatusOr<double> LaplaceSample(double scale, uint64_t seed) {
  if (!(scale > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("Laplace scale must be positive, got %g", scale));
  }
  Rng rng = MakeRng(seed);
  return LaplaceSample(scale, rng);
}

}  // namespace dpsbm

#endif  // DPSBM_ACCOUNTING_H_
