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

#include "dpsbm/graph.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "dpsbm/random.h"
#include "gtest/gtest.h"
#include "testing/oracles.h"
#include "testing/status_matchers.h"

namespace dpsbm {
namespace {

std::string WriteTemp(const std::string& name, const std::string& body) {
  const std::string path =
      std::string(::testing::TempDir()) + "/" + name;
  std::ofstream(path) << body;
  return path;
}

AdjacencyMatrix FromEdges(int n, const std::vector<std::pair<int, int>>& e) {
  AdjacencyBuilder b(n);
  for (auto [u, v] : e) b.SetEdge(u, v, true);
  return std::move(b).Build();
}

AdjacencyMatrix RandomGraph(int n, double prob, uint64_t seed) {
  Rng rng = MakeRng(seed);
  AdjacencyBuilder b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) b.SetEdge(i, j, UniformUnit(rng) < prob);
  }
  return std::move(b).Build();
}

void ExpectValidAdjacency(const AdjacencyMatrix& a) {
  for (int i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a(i, i), 0);
    for (int j = 0; j < a.size(); ++j) {
      EXPECT_EQ(a(i, j), a(j, i));
      EXPECT_LE(a(i, j), 1);
    }
  }
}

TEST(GenerateSbmTest, DisjointCliquesWhenPIsOneAndQIsZero) {
  ASSERT_OK_AND_ASSIGN(LabelVector truth, RandomBalancedLabels(10, 3));
  ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                       GenerateSbm(truth, SbmParams{10, 1.0, 0.0}, 7));
  ExpectValidAdjacency(a);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      EXPECT_EQ(a.HasEdge(i, j), i != j && truth[i] == truth[j]);
    }
  }
  EXPECT_EQ(a.EdgeCount(), 2 * 10);
}

TEST(GenerateSbmTest, EmptyWhenBothProbabilitiesZero) {
  ASSERT_OK_AND_ASSIGN(LabelVector truth, BalancedLabels(8));
  ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                       GenerateSbm(truth, SbmParams{8, 0.0, 0.0}, 1));
  EXPECT_EQ(a.EdgeCount(), 0);
}

TEST(GenerateSbmTest, RejectsUnbalancedTruthAndOddN) {
  ASSERT_OK_AND_ASSIGN(LabelVector bad, LabelVector::Create({1, 1, 1, -1}));
  EXPECT_STATUS_CODE(GenerateSbm(bad, SbmParams{4, 0.5, 0.1}, 1),
                     absl::StatusCode::kInvalidArgument);
  ASSERT_OK_AND_ASSIGN(LabelVector odd, LabelVector::Create({1, -1, 1}));
  EXPECT_STATUS_CODE(GenerateSbm(odd, SbmParams{3, 0.5, 0.1}, 1),
                     absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(SbmParams::Create(4, 0.1, 0.5).ok());
}

TEST(GenerateSbmTest, SameSeedSameGraph) {
  ASSERT_OK_AND_ASSIGN(LabelVector truth, RandomBalancedLabels(40, 1));
  ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                       GenerateSbm(truth, SbmParams{40, 0.3, 0.1}, 99));
  ASSERT_OK_AND_ASSIGN(AdjacencyMatrix b,
                       GenerateSbm(truth, SbmParams{40, 0.3, 0.1}, 99));
  ASSERT_OK_AND_ASSIGN(AdjacencyMatrix c,
                       GenerateSbm(truth, SbmParams{40, 0.3, 0.1}, 100));
  EXPECT_EQ(a, b);
  EXPECT_FALSE(a == c);
}

TEST(GenerateSbmTest, IntraFrequencyMatchesP) {
  const int n = 200;
  ASSERT_OK_AND_ASSIGN(LabelVector truth, BalancedLabels(n));
  int64_t intra_edges = 0, intra_pairs = 0;
  for (uint64_t seed = 0; seed < 100; ++seed) {
    ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                         GenerateSbm(truth, SbmParams{n, 0.2, 0.02}, seed));
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (truth[i] == truth[j]) {
          ++intra_pairs;
          intra_edges += a.HasEdge(i, j);
        }
      }
    }
  }
  const double freq = static_cast<double>(intra_edges) / intra_pairs;
  const double sd = std::sqrt(0.2 * 0.8 / intra_pairs);
  EXPECT_NEAR(freq, 0.2, 3.0 * sd);
}

TEST(GenerateSbmTest, EqualProbabilitiesGiveErdosRenyiEdgeCounts) {
  const int n = 30;
  const double p = 0.3;
  const double pairs = n * (n - 1) / 2.0;
  ASSERT_OK_AND_ASSIGN(LabelVector truth, BalancedLabels(n));
  for (uint64_t seed = 0; seed < 200; ++seed) {
    ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                         GenerateSbm(truth, SbmParams{n, p, p}, seed));
    EXPECT_NEAR(a.EdgeCount(), p * pairs, 4.0 * std::sqrt(pairs * p * (1 - p)))
        << "seed " << seed;
  }
}

TEST(LaplacianTest, ZeroGraphGivesZeroMatrix) {
  const Laplacian l(FromEdges(4, {}));
  for (double v : l.matrix().data()) EXPECT_EQ(v, 0.0);
}

TEST(LaplacianTest, SingleEdge) {
  const Laplacian l(FromEdges(2, {{0, 1}}));
  EXPECT_EQ(l.matrix()(0, 0), 1.0);
  EXPECT_EQ(l.matrix()(0, 1), -1.0);
  EXPECT_EQ(l.matrix()(1, 0), -1.0);
  EXPECT_EQ(l.matrix()(1, 1), 1.0);
}

TEST(LaplacianTest, PathOnThreeNodesHasSpectrumZeroOneThree) {
  const Laplacian l(FromEdges(3, {{0, 1}, {1, 2}}));
  testing::DenseMatrix m(3, std::vector<double>(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = l.matrix()(i, j);
  }
  const testing::JacobiResult r = testing::JacobiEigen(m);
  EXPECT_NEAR(r.values[0], 0.0, 1e-12);
  EXPECT_NEAR(r.values[1], 1.0, 1e-12);
  EXPECT_NEAR(r.values[2], 3.0, 1e-12);
}

TEST(LaplacianTest, RowSumsZeroAndQuadraticFormMatchesEdgeSum) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const AdjacencyMatrix a = RandomGraph(n, 0.5, seed);
    const Laplacian l(a);
    Rng rng = MakeRng(seed + 1000);
    std::vector<double> x(n);
    for (double& v : x) v = StandardNormal(rng);
    double edge_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        row += l.matrix()(i, j);
        if (j > i && a.HasEdge(i, j)) edge_sum += (x[i] - x[j]) * (x[i] - x[j]);
        if (i != j) {
          EXPECT_TRUE(l.matrix()(i, j) == 0.0 || l.matrix()(i, j) == -1.0);
        }
      }
      EXPECT_EQ(row, 0.0);
    }
    std::vector<double> lx(n);
    l.matrix().Multiply(x, lx);
    EXPECT_NEAR(Dot(x, lx), edge_sum, 1e-12);
    EXPECT_GE(Dot(x, lx), -1e-12);
  }
}

TEST(CenteredAdjacencyTest, ZeroGraph) {
  const CenteredAdjacency b(FromEdges(3, {}));
  EXPECT_EQ(b.rho(), 0.0);
  for (double v : b.matrix().data()) EXPECT_EQ(v, 0.0);
}

TEST(CenteredAdjacencyTest, SingleEdge) {
  const CenteredAdjacency b(FromEdges(2, {{0, 1}}));
  EXPECT_EQ(b.rho(), 0.5);
  EXPECT_EQ(b.matrix()(0, 0), -0.5);
  EXPECT_EQ(b.matrix()(0, 1), 0.5);
  EXPECT_EQ(b.matrix()(1, 1), -0.5);
}

TEST(CenteredAdjacencyTest, CompleteGraphOnFour) {
  const CenteredAdjacency b(
      FromEdges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
  EXPECT_EQ(b.rho(), 0.75);
  EXPECT_NEAR(b.matrix().Sum(), 0.0, 1e-9);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(b.matrix()(i, j), b.matrix()(j, i));
  }
}

TEST(CenteredAdjacencyTest, RowSumsAreDegreeMinusNRho) {
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const int n = 2 + static_cast<int>(seed % 7);
    const AdjacencyMatrix a = RandomGraph(n, 0.4, seed);
    const CenteredAdjacency b(a);
    const std::vector<double> ones(n, 1.0);
    std::vector<double> out(n);
    b.matrix().Multiply(ones, out);
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(out[i], a.Degree(i) - n * b.rho(), 1e-12);
    }
    EXPECT_NEAR(b.matrix().Sum(), 0.0, 1e-9);
  }
}

TEST(LoadEdgeListTest, PathGraph) {
  ASSERT_OK_AND_ASSIGN(AdjacencyMatrix a,
                       LoadEdgeList(WriteTemp("path.txt", "0 1\n1 2\n")));
  EXPECT_EQ(a.size(), 3);
  EXPECT_EQ(a.EdgeCount(), 2);
  EXPECT_TRUE(a.HasEdge(1, 0));
  EXPECT_TRUE(a.HasEdge(2, 1));
  EXPECT_FALSE(a.HasEdge(0, 2));
}

TEST(LoadEdgeListTest, DropsSelfLoopsAndSymmetrizes) {
  ASSERT_OK_AND_ASSIGN(
      AdjacencyMatrix a,
      LoadEdgeList(WriteTemp("loops.txt", "# comment\n0 1\n1 0\n2 2\n1 2\n")));
  ExpectValidAdjacency(a);
  EXPECT_EQ(a.EdgeCount(), 2);
}

TEST(LoadEdgeListTest, OneIndexedAndWeights) {
  ASSERT_OK_AND_ASSIGN(
      AdjacencyMatrix a,
      LoadEdgeList(WriteTemp("w.txt", "1 2 3\n2 3 0\n3 4 1\n")));
  EXPECT_EQ(a.size(), 4);
  EXPECT_TRUE(a.HasEdge(0, 1));
  EXPECT_FALSE(a.HasEdge(1, 2));
  EXPECT_TRUE(a.HasEdge(2, 3));
  EdgeListOptions strict;
  strict.binarize = false;
  EXPECT_FALSE(LoadEdgeList(WriteTemp("w2.txt", "1 2 3\n"), strict).ok());
}

TEST(LoadEdgeListTest, ErrorsNameTheLine) {
  absl::StatusOr<AdjacencyMatrix> bad =
      LoadEdgeList(WriteTemp("bad.txt", "0 1\nx 2\n"));
  ASSERT_FALSE(bad.ok());
  EXPECT_NE(bad.status().message().find(":2:"), std::string::npos);
  absl::StatusOr<AdjacencyMatrix> neg =
      LoadEdgeList(WriteTemp("neg.txt", "0 1\n1 -2\n"));
  ASSERT_FALSE(neg.ok());
  EXPECT_NE(neg.status().message().find(":2:"), std::string::npos);
  EXPECT_STATUS_CODE(LoadEdgeList("/nonexistent/file.txt"),
                     absl::StatusCode::kNotFound);
}

TEST(LoadLabelsTest, PlusMinusCoding) {
  ASSERT_OK_AND_ASSIGN(LabelVector v,
                       LoadLabels(WriteTemp("l.txt", "0 1\n1 -1\n"), 2));
  EXPECT_EQ(v.values(), (std::vector<int>{1, -1}));
}

TEST(LoadLabelsTest, ZeroOneCodingIsRemapped) {
  ASSERT_OK_AND_ASSIGN(LabelVector v,
                       LoadLabels(WriteTemp("l01.txt", "1 0\n2 1\n3 0\n")));
  EXPECT_EQ(v.values(), (std::vector<int>{-1, 1, -1}));
}

TEST(LoadLabelsTest, Errors) {
  EXPECT_FALSE(LoadLabels(WriteTemp("miss.txt", "0 1\n"), 2).ok());
  EXPECT_FALSE(LoadLabels(WriteTemp("dup.txt", "0 1\n0 -1\n1 1\n"), 2).ok());
  EXPECT_FALSE(LoadLabels(WriteTemp("dom.txt", "0 2\n1 1\n"), 2).ok());
  EXPECT_FALSE(LoadLabels(WriteTemp("mix.txt", "0 0\n1 -1\n"), 2).ok());
}

TEST(LabelVectorTest, RejectsOtherValues) {
  EXPECT_FALSE(LabelVector::Create({1, 0}).ok());
  ASSERT_OK_AND_ASSIGN(LabelVector v, RandomBalancedLabels(12, 5));
  EXPECT_EQ(v.CountPositive(), 6);
  EXPECT_EQ(v.Flipped().Flipped(), v);
}

}  // namespace
}  // namespace dpsbm
