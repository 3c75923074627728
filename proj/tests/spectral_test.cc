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

#include "dpsbm/spectral.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "dpsbm/graph.h"
#include "dpsbm/random.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "testing/status_matchers.h"

namespace dpsbm {
namespace {

using ::dpsbm::testing::DistanceUpToSign;
using ::dpsbm::testing::JacobiEigen;

AdjacencyMatrix FromEdges(int n, const std::vector<std::pair<int, int>>& e) {
  AdjacencyBuilder b(n);
  for (auto [u, v] : e) b.SetEdge(u, v, true);
  return std::move(b).Build();
}

testing::DenseMatrix ToDense(const SymmetricMatrix& m) {
  testing::DenseMatrix d(m.size(), std::vector<double>(m.size()));
  for (int i = 0; i < m.size(); ++i) {
    for (int j = 0; j < m.size(); ++j) d[i][j] = m(i, j);
  }
  return d;
}

SymmetricMatrix RandomSymmetric(int n, uint64_t seed) {
  Rng rng = MakeRng(seed);
  SymmetricMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) m.Set(i, j, 2.0 * UniformUnit(rng) - 1.0);
  }
  return m;
}

double ResidualOf(const SymmetricMatrix& m, const EigenPair& p) {
  std::vector<double> w(m.size());
  m.Multiply(p.vector, w);
  double r = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    r += (w[i] - p.value * p.vector[i]) * (w[i] - p.value * p.vector[i]);
  }
  return std::sqrt(r);
}

TEST(FiedlerTest, TwoDisjointEdges) {
  const Laplacian l(FromEdges(4, {{0, 1}, {2, 3}}));
  ASSERT_OK_AND_ASSIGN(FiedlerResult r, FiedlerVector(l, SolverConfig{}));
  EXPECT_NEAR(r.pair.value, 0.0, 1e-9);
  EXPECT_TRUE(r.diagnostics.degenerate);
  const auto& v = r.pair.vector;
  EXPECT_NEAR(v[0], v[1], 1e-8);
  EXPECT_NEAR(v[2], v[3], 1e-8);
  EXPECT_LT(v[0] * v[2], 0.0);
  EXPECT_NEAR(Norm2(v), 1.0, 1e-10);
}

TEST(FiedlerTest, PathOnThreeNodes) {
  const Laplacian l(FromEdges(3, {{0, 1}, {1, 2}}));
  ASSERT_OK_AND_ASSIGN(FiedlerResult r, FiedlerVector(l, SolverConfig{}));
  EXPECT_NEAR(r.pair.value, 1.0, 1e-9);
  const std::vector<double> expected = {1 / std::sqrt(2.0), 0.0,
                                        -1 / std::sqrt(2.0)};
  EXPECT_LT(DistanceUpToSign(r.pair.vector, expected), 1e-8);
  EXPECT_GT(r.pair.vector[0], 0.0);  // canonical sign
  EXPECT_FALSE(r.diagnostics.degenerate);
  EXPECT_EQ(r.diagnostics.shift, 2.0 * 2 + 1);
}

TEST(FiedlerTest, SeparatedCliquesSplitBySign) {
  ASSERT_OK_AND_ASSIGN(LabelVector truth, RandomBalancedLabels(6, 11));
  ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                       GenerateSbm(truth, SbmParams{6, 1.0, 0.0}, 1));
  const Laplacian l(a);
  ASSERT_OK_AND_ASSIGN(FiedlerResult r, FiedlerVector(l, SolverConfig{}));
  const testing::JacobiResult ref = JacobiEigen(ToDense(l.matrix()));
  EXPECT_NEAR(r.pair.value, ref.values[1], 1e-8);
  ASSERT_OK_AND_ASSIGN(LabelVector est, LabelsFromVector(r.pair.vector));
  ASSERT_OK_AND_ASSIGN(double err, ErrorRate(est, truth));
  EXPECT_EQ(err, 0.0);
}

TEST(FiedlerTest, ZeroLaplacianIsDegenerateButDefined) {
  const Laplacian l(FromEdges(5, {}));
  ASSERT_OK_AND_ASSIGN(FiedlerResult r, FiedlerVector(l, SolverConfig{}));
  EXPECT_EQ(r.pair.value, 0.0);
  EXPECT_TRUE(r.diagnostics.degenerate);
  EXPECT_NEAR(std::accumulate(r.pair.vector.begin(), r.pair.vector.end(), 0.0),
              0.0, 1e-15);
  EXPECT_NEAR(Norm2(r.pair.vector), 1.0, 1e-15);
}

TEST(FiedlerTest, RejectsTinyGraphsAndBadConfig) {
  EXPECT_FALSE(FiedlerVector(Laplacian(FromEdges(1, {})), SolverConfig{}).ok());
  SolverConfig bad;
  bad.tol = 0.0;
  EXPECT_FALSE(FiedlerVector(Laplacian(FromEdges(3, {{0, 1}})), bad).ok());
}

TEST(FiedlerTest, StrictPowerModeReportsNonConvergence) {
  // Ring: lambda_2 has multiplicity two but a tiny iteration cap cannot
  // converge from a random start.
  std::vector<std::pair<int, int>> ring;
  for (int i = 0; i < 40; ++i) ring.push_back({i, (i + 1) % 40});
  SolverConfig cfg;
  cfg.method = EigenMethod::kPower;
  cfg.max_iters = 3;
  absl::StatusOr<FiedlerResult> r = FiedlerVector(Laplacian(FromEdges(40, ring)), cfg);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.status().message().find("residual"), std::string::npos);
  cfg.method = EigenMethod::kAuto;
  ASSERT_OK_AND_ASSIGN(FiedlerResult fallback,
                       FiedlerVector(Laplacian(FromEdges(40, ring)), cfg));
  EXPECT_EQ(fallback.diagnostics.method_used, EigenMethod::kDense);
  EXPECT_NEAR(fallback.pair.value, 2.0 - 2.0 * std::cos(2.0 * M_PI / 40), 1e-9);
}

TEST(TopTwoTest, ZeroMatrix) {
  ASSERT_OK_AND_ASSIGN(TopTwoResult r,
                       TopTwoEigenpairs(SymmetricMatrix(4), SolverConfig{}));
  EXPECT_EQ(r.first.value, 0.0);
  EXPECT_EQ(r.second.value, 0.0);
  EXPECT_TRUE(r.near_degenerate_gap);
}

TEST(TopTwoTest, TwoByTwoCenteredEdge) {
  const CenteredAdjacency b(FromEdges(2, {{0, 1}}));
  ASSERT_OK_AND_ASSIGN(TopTwoResult r, TopTwoEigenpairs(b, SolverConfig{}));
  EXPECT_NEAR(r.first.value, 0.0, 1e-12);
  EXPECT_NEAR(r.second.value, -1.0, 1e-12);
  EXPECT_LT(DistanceUpToSign(r.first.vector,
                             {1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}),
            1e-9);
}

TEST(TopTwoTest, MatchesJacobiAndSatisfiesResidualContract) {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 9);
    const SymmetricMatrix m = RandomSymmetric(n, seed);
    SolverConfig cfg;
    ASSERT_OK_AND_ASSIGN(TopTwoResult r, TopTwoEigenpairs(m, cfg));
    const testing::JacobiResult ref = JacobiEigen(ToDense(m));
    EXPECT_NEAR(r.first.value, ref.values[n - 1], 1e-8);
    EXPECT_NEAR(r.second.value, ref.values[n - 2], 1e-8);
    const double tol = cfg.tol * std::max(1.0, m.MaxAbsRowSum());
    EXPECT_LE(ResidualOf(m, r.first), 10 * tol);
    EXPECT_LE(ResidualOf(m, r.second), 10 * tol);
    EXPECT_NEAR(Norm2(r.first.vector), 1.0, 1e-10);
    EXPECT_NEAR(Norm2(r.second.vector), 1.0, 1e-10);
  }
}

TEST(TopTwoTest, SbmLeadingEigenvalueAboveLogScaleBoundForMostSeeds) {
  const int n = 200;
  const double p = 0.2, q = 0.02;
  const double alpha = n * p / std::log(n), beta = n * q / std::log(n);
  const double bound = (alpha - beta) / 3.0 * std::log(n);
  int above = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    ASSERT_OK_AND_ASSIGN(LabelVector truth, RandomBalancedLabels(n, seed));
    ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                         GenerateSbm(truth, SbmParams{n, p, q}, seed + 500));
    ASSERT_OK_AND_ASSIGN(TopTwoResult r,
                         TopTwoEigenpairs(CenteredAdjacency(a), SolverConfig{}));
    above += r.first.value >= bound;
  }
  EXPECT_GT(above, 50);
}

TEST(DominantTest, AgreesWithTopTwo) {
  const SymmetricMatrix m = RandomSymmetric(7, 42);
  ASSERT_OK_AND_ASSIGN(FiedlerResult d, DominantEigenpair(m, SolverConfig{}));
  ASSERT_OK_AND_ASSIGN(TopTwoResult t, TopTwoEigenpairs(m, SolverConfig{}));
  EXPECT_NEAR(d.pair.value, t.first.value, 1e-9);
  EXPECT_LT(DistanceUpToSign(d.pair.vector, t.first.vector), 1e-6);
}

TEST(DenseMethodTest, AgreesWithPowerIteration) {
  const SymmetricMatrix m = RandomSymmetric(9, 5);
  SolverConfig dense;
  dense.method = EigenMethod::kDense;
  ASSERT_OK_AND_ASSIGN(TopTwoResult a, TopTwoEigenpairs(m, dense));
  ASSERT_OK_AND_ASSIGN(TopTwoResult b, TopTwoEigenpairs(m, SolverConfig{}));
  EXPECT_EQ(a.first_diagnostics.method_used, EigenMethod::kDense);
  EXPECT_NEAR(a.first.value, b.first.value, 1e-9);
  EXPECT_NEAR(a.second.value, b.second.value, 1e-9);
}

TEST(LabelsFromVectorTest, SignRule) {
  ASSERT_OK_AND_ASSIGN(LabelVector a,
                       LabelsFromVector(std::vector<double>{0.3, -0.2}));
  EXPECT_EQ(a.values(), (std::vector<int>{-1, 1}));
  ASSERT_OK_AND_ASSIGN(LabelVector b,
                       LabelsFromVector(std::vector<double>{0.0, 0.1}));
  EXPECT_EQ(b.values(), (std::vector<int>{1, -1}));
  ASSERT_OK_AND_ASSIGN(LabelVector c,
                       LabelsFromVector(std::vector<double>{-1, -1, 1, 1}));
  EXPECT_EQ(c.values(), (std::vector<int>{1, 1, -1, -1}));
  EXPECT_FALSE(LabelsFromVector(std::vector<double>{0.0, 0.0}).ok());
}

TEST(LabelsFromVectorTest, PositiveScaleInvariance) {
  Rng rng = MakeRng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(15), w(15);
    for (double& x : v) x = StandardNormal(rng);
    const double c = std::exp(4.0 * StandardNormal(rng));
    for (int i = 0; i < 15; ++i) w[i] = c * v[i];
    ASSERT_OK_AND_ASSIGN(LabelVector a, LabelsFromVector(v));
    ASSERT_OK_AND_ASSIGN(LabelVector b, LabelsFromVector(w));
    EXPECT_EQ(a, b);
  }
}

TEST(ErrorRateTest, Basics) {
  ASSERT_OK_AND_ASSIGN(LabelVector t, LabelVector::Create({1, 1, -1, -1}));
  ASSERT_OK_AND_ASSIGN(LabelVector one_off, LabelVector::Create({1, 1, -1, 1}));
  EXPECT_EQ(*ErrorRate(t, t), 0.0);
  EXPECT_EQ(*ErrorRate(t.Flipped(), t), 0.0);
  EXPECT_EQ(*ErrorRate(one_off, t), 0.25);
  EXPECT_EQ(*OverlapRate(one_off, t), 0.75);
  ASSERT_OK_AND_ASSIGN(LabelVector shorter, LabelVector::Create({1, -1}));
  EXPECT_FALSE(ErrorRate(shorter, t).ok());
}

TEST(ErrorRateTest, FlipAndPermutationInvariance) {
  Rng rng = MakeRng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 30;
    std::vector<int> a(n), b(n), perm(n);
    for (int i = 0; i < n; ++i) {
      a[i] = UniformUnit(rng) < 0.5 ? 1 : -1;
      b[i] = UniformUnit(rng) < 0.5 ? 1 : -1;
    }
    std::iota(perm.begin(), perm.end(), 0);
    for (int i = n - 1; i > 0; --i) {
      std::swap(perm[i], perm[static_cast<int>(UniformUnit(rng) * (i + 1))]);
    }
    std::vector<int> pa(n), pb(n);
    for (int i = 0; i < n; ++i) {
      pa[i] = a[perm[i]];
      pb[i] = b[perm[i]];
    }
    const LabelVector la = *LabelVector::Create(a);
    const LabelVector lb = *LabelVector::Create(b);
    const double e = *ErrorRate(la, lb);
    EXPECT_EQ(e, *ErrorRate(la.Flipped(), lb));
    EXPECT_EQ(e, *ErrorRate(*LabelVector::Create(pa), *LabelVector::Create(pb)));
    EXPECT_LE(e, 0.5);
  }
}

TEST(CanonicalizeSignTest, FirstSignificantCoordinatePositive) {
  std::vector<double> v = {1e-14, -0.5, 0.2};
  CanonicalizeSign(v);
  EXPECT_EQ(v[1], 0.5);
  EXPECT_EQ(v[2], -0.2);
}

}  // namespace
}  // namespace dpsbm
