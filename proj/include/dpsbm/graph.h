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

// Graph representation for two-community stochastic block models: dense
// adjacency, ground-truth labels, SBM sampling, the combinatorial Laplacian,
// the centered adjacency used by power iteration, and plain-text loaders.

#ifndef DPSBM_GRAPH_H_
#define DPSBM_GRAPH_H_

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/string_view.h"
#include "dpsbm/matrix.h"
#include "dpsbm/random.h"

namespace dpsbm {

// Largest node count accepted by the dense representation.
inline constexpr int kMaxDenseNodes = 20000;

class AdjacencyBuilder;

// Symmetric 0/1 matrix with zero diagonal. Immutable once built.
class AdjacencyMatrix {
 public:
  AdjacencyMatrix() = default;

  int size() const { return n_; }

  bool HasEdge(int i, int j) const {
    return entries_[static_cast<size_t>(i) * n_ + j] != 0;
  }
  uint8_t operator()(int i, int j) const {
    return entries_[static_cast<size_t>(i) * n_ + j];
  }
  int Degree(int i) const { return degrees_[i]; }
  int MaxDegree() const {
    return degrees_.empty() ? 0
                            : *std::max_element(degrees_.begin(),
                                                degrees_.end());
  }
  int64_t EdgeCount() const { return edge_count_; }

  std::span<const uint8_t> row(int i) const {
    return {entries_.data() + static_cast<size_t>(i) * n_,
            static_cast<size_t>(n_)};
  }

  // Complement graph (no self-loops).
  AdjacencyMatrix Complement() const;

  friend bool operator==(const AdjacencyMatrix& a, const AdjacencyMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  friend class AdjacencyBuilder;

  int n_ = 0;
  int64_t edge_count_ = 0;
  std::vector<uint8_t> entries_;
  std::vector<int> degrees_;
};

// Mutable staging area for an AdjacencyMatrix. Every write is mirrored and
// self-loops are ignored, so Build() always yields a valid matrix.
class AdjacencyBuilder {
 public:
  explicit AdjacencyBuilder(int n)
      : n_(n), entries_(static_cast<size_t>(n) * n, 0) {}

  int size() const { return n_; }

  void SetEdge(int i, int j, bool present) {
    if (i == j) return;
    const uint8_t v = present ? 1 : 0;
    entries_[static_cast<size_t>(i) * n_ + j] = v;
    entries_[static_cast<size_t>(j) * n_ + i] = v;
  }
  bool HasEdge(int i, int j) const {
    return entries_[static_cast<size_t>(i) * n_ + j] != 0;
  }

  AdjacencyMatrix Build() && {
    AdjacencyMatrix a;
    a.n_ = n_;
    a.degrees_.assign(n_, 0);
    int64_t twice_edges = 0;
    for (int i = 0; i < n_; ++i) {
      int d = 0;
      const uint8_t* r = entries_.data() + static_cast<size_t>(i) * n_;
      for (int j = 0; j < n_; ++j) d += r[j];
      a.degrees_[i] = d;
      twice_edges += d;
    }
    a.edge_count_ = twice_edges / 2;
    a.entries_ = std::move(entries_);
    return a;
  }

 private:
  int n_;
  std::vector<uint8_t> entries_;
};

inline AdjacencyMatrix AdjacencyMatrix::Complement() const {
  AdjacencyBuilder b(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) b.SetEdge(i, j, !HasEdge(i, j));
  }
  return std::move(b).Build();
}

// Community assignment over {-1, +1}.
class LabelVector {
 public:
  LabelVector() = default;

  static absl::StatusOr<LabelVector> Create(std::vector<int> labels) {
    for (size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != 1 && labels[i] != -1) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "label at %d is %d, expected -1 or +1", i, labels[i]));
      }
    }
    LabelVector v;
    v.labels_ = std::move(labels);
    return v;
  }

  int size() const { return static_cast<int>(labels_.size()); }
  int operator[](int i) const { return labels_[i]; }
  const std::vector<int>& values() const { return labels_; }

  int CountPositive() const {
    return static_cast<int>(
        std::count(labels_.begin(), labels_.end(), 1));
  }

  LabelVector Flipped() const {
    LabelVector v = *this;
    for (int& x : v.labels_) x = -x;
    return v;
  }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<int> labels_;
};

// First n/2 nodes in community +1, the rest in -1.
inline absl::StatusOr<LabelVector> BalancedLabels(int n) {
  if (n <= 0 || n % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("node count must be even and positive, got %d", n));
  }
  std::vector<int> v(n, -1);
  std::fill(v.begin(), v.begin() + n / 2, 1);
  return LabelVector::Create(std::move(v));
}

// Balanced labels in a uniformly random arrangement (Fisher-Yates).
inline absl::StatusOr<LabelVector> RandomBalancedLabels(int n, uint64_t seed) {
  if (n <= 0 || n % 2 != 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("node count must be even and positive, got %d", n));
  }
  std::vector<int> v(n, -1);
  std::fill(v.begin(), v.begin() + n / 2, 1);
  Rng rng = MakeRng(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(UniformUnit(rng) * (i + 1));
    std::swap(v[i], v[std::min(j, i)]);
  }
  return LabelVector::Create(std::move(v));
}

struct SbmParams {
  int n = 0;
  double p = 0.0;  // intra-community edge probability
  double q = 0.0;  // inter-community edge probability

  static absl::StatusOr<SbmParams> Create(int n, double p, double q) {
    SbmParams s{n, p, q};
    if (absl::Status st = s.Validate(); !st.ok()) return st;
    return s;
  }

  absl::Status Validate() const {
    if (n <= 0 || n % 2 != 0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("n must be even and positive, got %d", n));
    }
    if (n > kMaxDenseNodes) {
      return absl::InvalidArgumentError(
          absl::StrFormat("n=%d exceeds dense limit %d", n, kMaxDenseNodes));
    }
    if (!(0.0 <= q && q <= p && p <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "need 0 <= q <= p <= 1, got p=%g q=%g", p, q));
    }
    return absl::OkStatus();
  }
};

// Samples an SBM graph. Upper-triangular pairs are visited row-major
// (i < j) with one uniform draw each, so a seed fixes the graph exactly.
inline absl::StatusOr<AdjacencyMatrix> GenerateSbm(const LabelVector& truth,
                                                   const SbmParams& params,
                                                   uint64_t seed) {
  if (absl::Status st = params.Validate(); !st.ok()) return st;
  if (truth.size() != params.n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "truth has %d labels, params.n=%d", truth.size(), params.n));
  }
  if (truth.CountPositive() * 2 != params.n) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "truth is unbalanced: %d of %d labels are +1", truth.CountPositive(),
        params.n));
  }
  const int n = params.n;
  Rng rng = MakeRng(seed);
  AdjacencyBuilder b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double prob = truth[i] == truth[j] ? params.p : params.q;
      if (UniformUnit(rng) < prob) b.SetEdge(i, j, true);
    }
  }
  return std::move(b).Build();
}

// L = D - A.
class Laplacian {
 public:
  explicit Laplacian(const AdjacencyMatrix& a)
      : matrix_(a.size()), max_degree_(a.MaxDegree()) {
    const int n = a.size();
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (a.HasEdge(i, j)) matrix_.Set(i, j, -1.0);
      }
      matrix_.Set(i, i, static_cast<double>(a.Degree(i)));
    }
  }

  int size() const { return matrix_.size(); }
  int max_degree() const { return max_degree_; }
  const SymmetricMatrix& matrix() const { return matrix_; }

 private:
  SymmetricMatrix matrix_;
  int max_degree_;
};

inline Laplacian BuildLaplacian(const AdjacencyMatrix& a) {
  return Laplacian(a);
}

// B = A - rho 11^T with rho = 1^T A 1 / n^2.
class CenteredAdjacency {
 public:
  explicit CenteredAdjacency(const AdjacencyMatrix& a) : matrix_(a.size()) {
    const int n = a.size();
    if (n == 0) return;
    rho_ = 2.0 * static_cast<double>(a.EdgeCount()) /
           (static_cast<double>(n) * static_cast<double>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        matrix_.Set(i, j, static_cast<double>(a(i, j)) - rho_);
      }
    }
  }

  int size() const { return matrix_.size(); }
  double rho() const { return rho_; }
  const SymmetricMatrix& matrix() const { return matrix_; }

 private:
  SymmetricMatrix matrix_;
  double rho_ = 0.0;
};

inline CenteredAdjacency CenterAdjacency(const AdjacencyMatrix& a) {
  return CenteredAdjacency(a);
}

// ---------------------------------------------------------------------------
// Text loaders.

enum class IndexBase { kAuto, kZero, kOne };

struct EdgeListOptions {
  // Keep an edge iff its weight is > 0. When false, weights must be 0 or 1.
  bool binarize = true;
  IndexBase index_base = IndexBase::kAuto;
  // Lower bound on the node count, for trailing isolated nodes.
  int min_nodes = 0;
};

namespace internal {

struct ParsedLine {
  int line_number;
  std::vector<absl::string_view> tokens;
};

inline absl::StatusOr<std::vector<std::string>> ReadLines(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot open '%s'", path));
  }
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  if (in.bad()) {
    return absl::DataLossError(absl::StrFormat("error reading '%s'", path));
  }
  return lines;
}

inline std::vector<ParsedLine> Tokenize(const std::vector<std::string>& lines) {
  std::vector<ParsedLine> out;
  for (size_t k = 0; k < lines.size(); ++k) {
    absl::string_view s = absl::StripAsciiWhitespace(lines[k]);
    if (s.empty() || s.front() == '#' || s.front() == '%') continue;
    out.push_back({static_cast<int>(k + 1),
                   absl::StrSplit(s, absl::ByAnyChar(" \t,"),
                                  absl::SkipEmpty())});
  }
  return out;
}

inline absl::StatusOr<int64_t> ParseId(absl::string_view tok, int line,
                                       const std::string& path) {
  int64_t v = 0;
  if (!absl::SimpleAtoi(tok, &v)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s:%d: non-numeric node id '%s'", path, line, tok));
  }
  if (v < 0) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s:%d: negative node id %d", path, line, v));
  }
  return v;
}

inline int ResolveBase(IndexBase base, int64_t min_id) {
  switch (base) {
    case IndexBase::kZero:
      return 0;
    case IndexBase::kOne:
      return 1;
    case IndexBase::kAuto:
      break;
  }
  return min_id == 0 ? 0 : 1;
}

}  // namespace internal

// Reads whitespace-separated `u v [weight]` lines. Comment lines start with
// '#' (or '%'). The graph is symmetrized by logical OR and self-loops are
// dropped.
inline absl::StatusOr<AdjacencyMatrix> LoadEdgeList(
    const std::string& path, const EdgeListOptions& options = {}) {
  auto lines = internal::ReadLines(path);
  if (!lines.ok()) return lines.status();

  struct Edge {
    int64_t u, v;
  };
  std::vector<Edge> edges;
  int64_t min_id = std::numeric_limits<int64_t>::max();
  int64_t max_id = -1;
  for (const auto& pl : internal::Tokenize(*lines)) {
    if (pl.tokens.size() < 2 || pl.tokens.size() > 3) {
      return absl::InvalidArgumentError(
          absl::StrFormat("%s:%d: expected 'u v [weight]'", path,
                          pl.line_number));
    }
    auto u = internal::ParseId(pl.tokens[0], pl.line_number, path);
    if (!u.ok()) return u.status();
    auto v = internal::ParseId(pl.tokens[1], pl.line_number, path);
    if (!v.ok()) return v.status();
    double w = 1.0;
    if (pl.tokens.size() == 3 && !absl::SimpleAtod(pl.tokens[2], &w)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: non-numeric weight '%s'", path, pl.line_number,
          pl.tokens[2]));
    }
    if (!options.binarize && w != 0.0 && w != 1.0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: weight %g is not 0/1 and binarize is off", path,
          pl.line_number, w));
    }
    min_id = std::min({min_id, *u, *v});
    max_id = std::max({max_id, *u, *v});
    if (w > 0.0) edges.push_back({*u, *v});
  }

  const int base =
      max_id < 0 ? 0 : internal::ResolveBase(options.index_base, min_id);
  if (max_id >= 0 && min_id < base) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s: node id %d below index base %d", path, min_id, base));
  }
  const int64_t n64 = std::max<int64_t>(max_id - base + 1, options.min_nodes);
  if (n64 > kMaxDenseNodes) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "%s: %d nodes exceed dense limit %d", path, n64, kMaxDenseNodes));
  }
  AdjacencyBuilder b(static_cast<int>(n64));
  for (const Edge& e : edges) {
    b.SetEdge(static_cast<int>(e.u - base), static_cast<int>(e.v - base),
              true);
  }
  return std::move(b).Build();
}

struct LabelFileOptions {
  IndexBase index_base = IndexBase::kAuto;
};

// Reads `node label` lines with labels in {-1,+1} or {0,1} (0 maps to -1).
// When `n` is empty the node count is inferred from the largest id.
inline absl::StatusOr<LabelVector> LoadLabels(
    const std::string& path, std::optional<int> n = std::nullopt,
    const LabelFileOptions& options = {}) {
  auto lines = internal::ReadLines(path);
  if (!lines.ok()) return lines.status();

  struct Entry {
    int64_t node;
    int label;
    int line;
  };
  std::vector<Entry> entries;
  int64_t min_id = std::numeric_limits<int64_t>::max();
  int64_t max_id = -1;
  bool saw_zero = false;
  bool saw_negative = false;
  for (const auto& pl : internal::Tokenize(*lines)) {
    if (pl.tokens.size() != 2) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: expected 'node label'", path, pl.line_number));
    }
    auto node = internal::ParseId(pl.tokens[0], pl.line_number, path);
    if (!node.ok()) return node.status();
    int label = 0;
    if (!absl::SimpleAtoi(pl.tokens[1], &label) ||
        (label != -1 && label != 0 && label != 1)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: label '%s' outside {-1,0,1}", path, pl.line_number,
          pl.tokens[1]));
    }
    saw_zero |= label == 0;
    saw_negative |= label == -1;
    min_id = std::min(min_id, *node);
    max_id = std::max(max_id, *node);
    entries.push_back({*node, label, pl.line_number});
  }
  if (saw_zero && saw_negative) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: mixes {0,1} and {-1,+1} label codings", path));
  }
  if (entries.empty()) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: no labels found", path));
  }
  const int base = internal::ResolveBase(options.index_base, min_id);
  if (min_id < base) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "%s: node id %d below index base %d", path, min_id, base));
  }
  const int64_t count = n.has_value() ? *n : max_id - base + 1;
  if (count <= 0 || count > kMaxDenseNodes) {
    return absl::InvalidArgumentError(
        absl::StrFormat("%s: invalid node count %d", path, count));
  }
  std::vector<int> values(static_cast<size_t>(count), 0);
  for (const Entry& e : entries) {
    const int64_t idx = e.node - base;
    if (idx >= count) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: node %d out of range for n=%d", path, e.line, e.node,
          count));
    }
    if (values[idx] != 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s:%d: duplicate label for node %d", path, e.line, e.node));
    }
    values[idx] = (e.label == 0) ? -1 : e.label;
  }
  for (int64_t i = 0; i < count; ++i) {
    if (values[i] == 0) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s: missing label for node %d", path, i + base));
    }
  }
  return LabelVector::Create(std::move(values));
}

}  // namespace dpsbm

#endif  // DPSBM_GRAPH_H_
