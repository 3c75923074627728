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

// Edge-private community recovery:
//
//   PerturbAndCluster       randomized response, then spectral clustering
//   SubsamplingStability    sample-and-aggregate over edge-subsampled graphs
//                           with a Laplace-noised stability test
//   NoisyPowerIteration     power iteration on the centered adjacency with
//                           Gaussian noise scaled to the step's sensitivity
//   PrivatePowerWithInit    the above, started from the second eigenvector of
//                           a Gaussian-noised adjacency matrix
//
// Every mechanism is a pure function of its inputs and one seed.

#ifndef DPSBM_MECHANISMS_H_
#define DPSBM_MECHANISMS_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "dpsbm/accounting.h"
#include "dpsbm/graph.h"
#include "dpsbm/internal/status_macros.h"
#include "dpsbm/matrix.h"
#include "dpsbm/random.h"
#include "dpsbm/spectral.h"

namespace dpsbm {

struct MechanismOutcome {
  LabelVector labels;
  // Set when the stability test failed; labels are then uniform noise.
  bool bottom = false;
  // Flip probability, Laplace scale or Gaussian sigma, by mechanism.
  double noise_scale = 0.0;
  int iterations = 0;
  std::map<std::string, double> meta;
  // Real-valued vector the labels were read from, when there is one.
  std::vector<double> embedding;
};

// ---------------------------------------------------------------------------
// Randomized response.

inline double FlipProbability(double eps) { return 1.0 / (std::exp(eps) + 1.0); }

class RRConfig {
 public:
  static absl::StatusOr<RRConfig> Create(double eps) {
    if (!(eps > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("eps must be positive, got %g", eps));
    }
    RRConfig c;
    c.eps_ = eps;
    c.mu_ = FlipProbability(eps);
    return c;
  }

  double epsilon() const { return eps_; }
  double mu() const { return mu_; }

 private:
  double eps_ = 0.0;
  double mu_ = 0.5;
};

// Flips each unordered pair i < j independently with probability mu, one
// uniform draw per pair in row-major order. The flip decisions do not
// depend on A.
inline absl::StatusOr<AdjacencyMatrix> RandomizedResponse(
    const AdjacencyMatrix& a, double eps, uint64_t seed) {
  DPSBM_ASSIGN_OR_RETURN(const RRConfig cfg, RRConfig::Create(eps));
  const int n = a.size();
  Rng rng = MakeRng(seed);
  AdjacencyBuilder b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool flip = UniformUnit(rng) < cfg.mu();
      b.SetEdge(i, j, a.HasEdge(i, j) != flip);
    }
  }
  return std::move(b).Build();
}

// Non-private spectral clustering: sign pattern of the Fiedler vector.
inline absl::StatusOr<MechanismOutcome> SpectralCluster(
    const AdjacencyMatrix& a, const SolverConfig& cfg) {
  DPSBM_ASSIGN_OR_RETURN(FiedlerResult f, FiedlerVector(Laplacian(a), cfg));
  MechanismOutcome out;
  DPSBM_ASSIGN_OR_RETURN(out.labels, LabelsFromVector(f.pair.vector));
  out.iterations = f.diagnostics.iterations;
  out.meta["lambda2"] = f.pair.value;
  out.meta["degenerate"] = f.diagnostics.degenerate ? 1.0 : 0.0;
  out.meta["dense_fallback"] =
      f.diagnostics.method_used == EigenMethod::kDense ? 1.0 : 0.0;
  out.embedding = std::move(f.pair.vector);
  return out;
}

inline absl::StatusOr<MechanismOutcome> PerturbAndCluster(
    const AdjacencyMatrix& a, double eps, const SolverConfig& cfg,
    uint64_t seed) {
  DPSBM_ASSIGN_OR_RETURN(const RRConfig rr, RRConfig::Create(eps));
  DPSBM_ASSIGN_OR_RETURN(const AdjacencyMatrix noisy,
                         RandomizedResponse(a, eps, DeriveSeed(seed, 0)));
  DPSBM_ASSIGN_OR_RETURN(MechanismOutcome out, SpectralCluster(noisy, cfg));
  out.noise_scale = rr.mu();
  out.meta["mu"] = rr.mu();
  return out;
}

// ---------------------------------------------------------------------------
// Subsampling stability.

enum class Aggregator {
  kVectorMode,    // most frequent canonical labeling
  kNodeMajority,  // per-node majority over canonical labelings
};

struct SubsampleOptions {
  Aggregator aggregator = Aggregator::kVectorMode;
  int64_t max_subgraphs = 1'000'000;
};

struct SubsampleConfig {
  double q_s = 1.0;
  int64_t m = 1;
  double laplace_scale = 1.0;
  double threshold = 0.0;
  Aggregator aggregator = Aggregator::kVectorMode;

  // Natural logs throughout.
  static absl::StatusOr<SubsampleConfig> Compute(
      int n, double eps, double delta, const SubsampleOptions& options = {}) {
    if (!(eps > 0.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("eps must be positive, got %g", eps));
    }
    if (!(delta > 0.0 && delta < 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("delta must lie in (0, 1), got %g", delta));
    }
    if (n < 2) {
      return absl::InvalidArgumentError(
          absl::StrFormat("need n >= 2, got %d", n));
    }
    SubsampleConfig c;
    c.q_s = std::min(1.0, eps / (32.0 * std::log(static_cast<double>(n))));
    const double m = std::ceil(std::log(n / delta) / (c.q_s * c.q_s));
    if (m > static_cast<double>(options.max_subgraphs)) {
      return absl::ResourceExhaustedError(absl::StrFormat(
          "subsampling needs m=%.0f subgraphs (q_s=%g), above the cap of %d; "
          "use a larger eps or raise the cap",
          m, c.q_s, options.max_subgraphs));
    }
    c.m = static_cast<int64_t>(m);
    c.laplace_scale = 1.0 / eps;
    c.threshold = std::log(1.0 / delta) / eps;
    c.aggregator = options.aggregator;
    return c;
  }
};

// Keeps each existing edge independently with probability q_s.
inline AdjacencyMatrix SubsampleEdges(const AdjacencyMatrix& a, double q_s,
                                      uint64_t seed) {
  const int n = a.size();
  Rng rng = MakeRng(seed);
  AdjacencyBuilder b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (a.HasEdge(i, j) && UniformUnit(rng) < q_s) b.SetEdge(i, j, true);
    }
  }
  return std::move(b).Build();
}

inline absl::StatusOr<LabelVector> UniformRandomLabels(int n, uint64_t seed) {
  Rng rng = MakeRng(seed);
  std::vector<int> v(n);
  for (int& x : v) x = UniformUnit(rng) < 0.5 ? 1 : -1;
  return LabelVector::Create(std::move(v));
}

namespace internal {

inline std::vector<uint64_t> PackLabels(const LabelVector& labels) {
  std::vector<uint64_t> bits((labels.size() + 63) / 64, 0);
  for (int i = 0; i < labels.size(); ++i) {
    if (labels[i] > 0) bits[i / 64] |= uint64_t{1} << (i % 64);
  }
  return bits;
}

inline LabelVector CanonicalFlip(const LabelVector& labels) {
  return labels.size() > 0 && labels[0] < 0 ? labels.Flipped() : labels;
}

}  // namespace internal

inline absl::StatusOr<MechanismOutcome> SubsamplingStability(
    const AdjacencyMatrix& a, double eps, double delta,
    const SolverConfig& cfg, uint64_t seed,
    const SubsampleOptions& options = {}) {
  const int n = a.size();
  DPSBM_ASSIGN_OR_RETURN(const SubsampleConfig sc,
                         SubsampleConfig::Compute(n, eps, delta, options));

  struct Bucket {
    int64_t count = 0;
    int64_t first = 0;
    LabelVector labels;
  };
  std::map<std::vector<uint64_t>, Bucket> histogram;
  std::vector<int64_t> votes(n, 0);
  const uint64_t subgraph_root = DeriveSeed(seed, 1);
  for (int64_t k = 0; k < sc.m; ++k) {
    const AdjacencyMatrix sub =
        SubsampleEdges(a, sc.q_s, DeriveSeed(subgraph_root, k));
    DPSBM_ASSIGN_OR_RETURN(const MechanismOutcome one, SpectralCluster(sub, cfg));
    LabelVector canon = internal::CanonicalFlip(one.labels);
    for (int i = 0; i < n; ++i) votes[i] += canon[i];
    auto [it, inserted] = histogram.try_emplace(internal::PackLabels(canon));
    if (inserted) {
      it->second.first = k;
      it->second.labels = std::move(canon);
    }
    ++it->second.count;
  }

  // Mode: highest count, earliest first appearance on ties.
  const Bucket* mode = nullptr;
  int64_t count1 = 0, count2 = 0;
  for (const auto& [key, bucket] : histogram) {
    if (mode == nullptr || bucket.count > mode->count ||
        (bucket.count == mode->count && bucket.first < mode->first)) {
      mode = &bucket;
    }
  }
  for (const auto& [key, bucket] : histogram) {
    if (&bucket == mode) {
      count1 = bucket.count;
    } else {
      count2 = std::max(count2, bucket.count);
    }
  }

  const double d_hat =
      static_cast<double>(count1 - count2) / (4.0 * sc.m * sc.q_s) - 1.0;
  Rng laplace_rng = MakeRng(DeriveSeed(seed, 2));
  const double d_tilde = d_hat + LaplaceSample(sc.laplace_scale, laplace_rng);

  MechanismOutcome out;
  out.noise_scale = sc.laplace_scale;
  out.iterations = static_cast<int>(std::min<int64_t>(sc.m, INT32_MAX));
  out.meta["q_s"] = sc.q_s;
  out.meta["m"] = static_cast<double>(sc.m);
  out.meta["d_hat"] = d_hat;
  out.meta["d_tilde"] = d_tilde;
  out.meta["threshold"] = sc.threshold;
  out.meta["count1"] = static_cast<double>(count1);
  out.meta["count2"] = static_cast<double>(count2);
  out.meta["distinct_labelings"] = static_cast<double>(histogram.size());
  out.meta["aggregator"] = sc.aggregator == Aggregator::kVectorMode ? 0 : 1;

  if (d_tilde > sc.threshold) {
    if (sc.aggregator == Aggregator::kVectorMode) {
      out.labels = mode->labels;
    } else {
      std::vector<int> majority(n);
      for (int i = 0; i < n; ++i) majority[i] = votes[i] >= 0 ? 1 : -1;
      DPSBM_ASSIGN_OR_RETURN(out.labels,
                             LabelVector::Create(std::move(majority)));
    }
  } else {
    out.bottom = true;
    DPSBM_ASSIGN_OR_RETURN(out.labels,
                           UniformRandomLabels(n, DeriveSeed(seed, 3)));
  }
  out.meta["bottom"] = out.bottom ? 1.0 : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// Noisy power iteration.

// Per-step multiplier applied to sigma.
enum class SensitivityRule {
  kAdaptive,   // ||y||_inf + 1/n, from the current iterate
  kWorstCase,  // 1 + 1/n
  // sqrt(2) ||y||_inf + 2/n. Covers a neighbor that flips both A_ij and
  // A_ji, where the adaptive multiplier can be exceeded.
  kEdgeFlip,
};

inline double SensitivityMultiplier(SensitivityRule rule,
                                    std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  switch (rule) {
    case SensitivityRule::kAdaptive:
      return NormInf(y) + 1.0 / n;
    case SensitivityRule::kWorstCase:
      return 1.0 + 1.0 / n;
    case SensitivityRule::kEdgeFlip:
      return std::sqrt(2.0) * NormInf(y) + 2.0 / n;
  }
  return 1.0 + 1.0 / n;
}

struct NoisyPowerOptions {
  SensitivityRule rule = SensitivityRule::kAdaptive;
  // Unit-norm start vector; drawn uniformly from the sphere when unset.
  std::optional<std::vector<double>> init;
};

struct NoisyPowerState {
  std::vector<double> y;  // current unit iterate
  int t = 0;
  double sigma = 0.0;
  std::vector<double> linf_trace;   // ||y_{t-1}||_inf for t = 1..N
  std::vector<double> multipliers;  // sensitivity multiplier used at step t
  std::vector<double> x_norms;      // ||x_t||_2
};

// y_t = normalize(B y_{t-1} + z_t), z_t ~ N(0, (mult_t sigma)^2 I).
// With sigma == 0 no noise is drawn at all.
inline absl::StatusOr<NoisyPowerState> RunNoisyPower(
    const SymmetricMatrix& b, double sigma, int n_steps, uint64_t seed,
    const NoisyPowerOptions& options = {}) {
  const int n = b.size();
  if (n < 1) return absl::InvalidArgumentError("empty matrix");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sigma must be finite and >= 0, got %g", sigma));
  }
  if (n_steps < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("number of iterations must be >= 1, got %d", n_steps));
  }
  NoisyPowerState st;
  st.sigma = sigma;
  if (options.init.has_value()) {
    if (static_cast<int>(options.init->size()) != n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "init has length %d, expected %d", options.init->size(), n));
    }
    if (std::abs(Norm2(*options.init) - 1.0) > 1e-8) {
      return absl::InvalidArgumentError("init must have unit norm");
    }
    st.y = *options.init;
  } else {
    st.y.resize(n);
    Rng init_rng = MakeRng(DeriveSeed(seed, 0));
    if (!FillUniformUnitVector(init_rng, st.y)) {
      return absl::InternalError("degenerate start vector");
    }
  }

  Rng noise_rng = MakeRng(DeriveSeed(seed, 1));
  std::vector<double> x(n);
  st.linf_trace.reserve(n_steps);
  st.multipliers.reserve(n_steps);
  st.x_norms.reserve(n_steps);
  for (int t = 1; t <= n_steps; ++t) {
    const double mult = SensitivityMultiplier(options.rule, st.y);
    st.linf_trace.push_back(NormInf(st.y));
    st.multipliers.push_back(mult);
    b.Multiply(st.y, x);
    if (sigma > 0.0) {
      const double scale = mult * sigma;
      for (double& xi : x) xi += scale * StandardNormal(noise_rng);
    }
    const double norm = Norm2(x);
    st.x_norms.push_back(norm);
    if (!(norm > 0.0)) {
      return absl::FailedPreconditionError(
          absl::StrFormat("iterate vanished at step %d", t));
    }
    for (int i = 0; i < n; ++i) st.y[i] = x[i] / norm;
    st.t = t;
  }
  return st;
}

inline absl::StatusOr<MechanismOutcome> OutcomeFromPowerState(
    NoisyPowerState st) {
  MechanismOutcome out;
  DPSBM_ASSIGN_OR_RETURN(out.labels, LabelsFromVector(st.y));
  out.noise_scale = st.sigma;
  out.iterations = st.t;
  out.meta["sigma"] = st.sigma;
  double max_mult = 0.0;
  for (double m : st.multipliers) max_mult = std::max(max_mult, m);
  out.meta["max_multiplier"] = max_mult;
  for (size_t t = 0; t < st.multipliers.size(); ++t) {
    out.meta[absl::StrFormat("multiplier_%d", t + 1)] = st.multipliers[t];
  }
  out.embedding = std::move(st.y);
  return out;
}

// Runs on the centered adjacency of `a` with an explicit noise ratio.
inline absl::StatusOr<MechanismOutcome> NoisyPowerIteration(
    const AdjacencyMatrix& a, double sigma, int n_steps, uint64_t seed,
    const NoisyPowerOptions& options = {}) {
  const CenteredAdjacency b(a);
  DPSBM_ASSIGN_OR_RETURN(NoisyPowerState st,
                         RunNoisyPower(b.matrix(), sigma, n_steps, seed,
                                       options));
  DPSBM_ASSIGN_OR_RETURN(MechanismOutcome out,
                         OutcomeFromPowerState(std::move(st)));
  out.meta["rho"] = b.rho();
  return out;
}

// Calibrates sigma from the budget (N-fold composition) and runs.
inline absl::StatusOr<MechanismOutcome> NoisyPowerWithBudget(
    const AdjacencyMatrix& a, const PrivacyBudget& budget, uint64_t seed,
    const NoisyPowerOptions& options = {}) {
  DPSBM_RETURN_IF_ERROR(budget.Validate());
  DPSBM_ASSIGN_OR_RETURN(
      const double sigma,
      SigmaForBudget(budget.epsilon, budget.delta, budget.iterations));
  return NoisyPowerIteration(a, sigma, budget.iterations, seed, options);
}

// Second eigenvector of A + G, G symmetric with i.i.d. N(0, sigma^2) entries
// on and above the diagonal. sigma == 0 gives the noiseless eigenvector.
inline absl::StatusOr<std::vector<double>> NoisySecondEigenvector(
    const AdjacencyMatrix& a, double sigma, const SolverConfig& cfg,
    uint64_t seed) {
  const int n = a.size();
  SymmetricMatrix m(n);
  Rng rng = MakeRng(seed);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = static_cast<double>(a(i, j));
      if (sigma > 0.0) v += sigma * StandardNormal(rng);
      m.Set(i, j, v);
    }
  }
  DPSBM_ASSIGN_OR_RETURN(TopTwoResult top, TopTwoEigenpairs(m, cfg));
  return std::move(top.second.vector);
}

// One Gaussian release of the adjacency matrix picks y_0, then N noisy
// power steps; sigma is calibrated for N + 1 compositions.
inline absl::StatusOr<MechanismOutcome> PrivatePowerWithInit(
    const AdjacencyMatrix& a, const PrivacyBudget& budget,
    const SolverConfig& cfg, uint64_t seed,
    SensitivityRule rule = SensitivityRule::kAdaptive) {
  DPSBM_RETURN_IF_ERROR(budget.Validate());
  DPSBM_ASSIGN_OR_RETURN(
      const double sigma,
      SigmaForBudget(budget.epsilon, budget.delta, budget.iterations + 1));
  NoisyPowerOptions options;
  options.rule = rule;
  DPSBM_ASSIGN_OR_RETURN(options.init,
                         NoisySecondEigenvector(a, sigma, cfg,
                                                DeriveSeed(seed, 7)));
  DPSBM_ASSIGN_OR_RETURN(
      MechanismOutcome out,
      NoisyPowerIteration(a, sigma, budget.iterations, seed, options));
  out.meta["compositions"] = budget.iterations + 1;
  return out;
}

// Same power steps from the noiseless second eigenvector of A; sigma is
// calibrated for N compositions since the start vector is not released.
inline absl::StatusOr<MechanismOutcome> FixedInitPower(
    const AdjacencyMatrix& a, const PrivacyBudget& budget,
    const SolverConfig& cfg, uint64_t seed,
    SensitivityRule rule = SensitivityRule::kAdaptive) {
  DPSBM_RETURN_IF_ERROR(budget.Validate());
  DPSBM_ASSIGN_OR_RETURN(
      const double sigma,
      SigmaForBudget(budget.epsilon, budget.delta, budget.iterations));
  NoisyPowerOptions options;
  options.rule = rule;
  DPSBM_ASSIGN_OR_RETURN(options.init, NoisySecondEigenvector(a, 0.0, cfg, 0));
  return NoisyPowerIteration(a, sigma, budget.iterations, seed, options);
}

}  // namespace dpsbm

#endif  // DPSBM_MECHANISMS_H_
