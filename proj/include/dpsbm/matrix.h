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

#ifndef DPSBM_MATRIX_H_
#define DPSBM_MATRIX_H_

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace dpsbm {

// Dense symmetric real matrix stored row-major in full. Writes go through
// Set(), which mirrors, so the symmetry invariant cannot be broken.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n)
      : n_(n), data_(static_cast<size_t>(n) * static_cast<size_t>(n), 0.0) {}

  // Validates exact symmetry of a row-major n*n buffer.
  static absl::StatusOr<SymmetricMatrix> FromRowMajor(
      int n, std::vector<double> entries) {
    if (n < 0 || entries.size() != static_cast<size_t>(n) * n) {
      return absl::InvalidArgumentError(
          absl::StrFormat("expected %d x %d entries, got %d", n, n,
                          entries.size()));
    }
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (entries[static_cast<size_t>(i) * n + j] !=
            entries[static_cast<size_t>(j) * n + i]) {
          return absl::InvalidArgumentError(
              absl::StrFormat("matrix not symmetric at (%d, %d)", i, j));
        }
      }
    }
    SymmetricMatrix m;
    m.n_ = n;
    m.data_ = std::move(entries);
    return m;
  }

  int size() const { return n_; }

  double operator()(int i, int j) const { return data_[Index(i, j)]; }

  void Set(int i, int j, double value) {
    data_[Index(i, j)] = value;
    data_[Index(j, i)] = value;
  }

  void AddToDiagonal(double value) {
    for (int i = 0; i < n_; ++i) data_[Index(i, i)] += value;
  }

  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<size_t>(i) * n_,
            static_cast<size_t>(n_)};
  }

  const std::vector<double>& data() const { return data_; }

  // y = M x. Rows are accumulated left to right.
  void Multiply(std::span<const double> x, std::span<double> y) const {
    assert(x.size() == static_cast<size_t>(n_));
    assert(y.size() == static_cast<size_t>(n_));
    const double* p = data_.data();
    for (int i = 0; i < n_; ++i, p += n_) {
      double acc = 0.0;
      for (int j = 0; j < n_; ++j) acc += p[j] * x[j];
      y[i] = acc;
    }
  }

  // Max absolute row sum, an upper bound on the spectral radius.
  double MaxAbsRowSum() const {
    double best = 0.0;
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (double v : row(i)) s += std::abs(v);
      best = std::max(best, s);
    }
    return best;
  }

  double Sum() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
  }

 private:
  size_t Index(int i, int j) const {
    assert(i >= 0 && i < n_ && j >= 0 && j < n_);
    return static_cast<size_t>(i) * n_ + j;
  }

  int n_ = 0;
  std::vector<double> data_;
};

inline double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double Norm2(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

inline double NormInf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Removes from `v` its components along each (unit) vector in `basis`.
inline void ProjectOut(std::span<const std::vector<double>> basis,
                       std::span<double> v) {
  for (const auto& q : basis) {
    const double c = Dot(q, v);
    for (size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
  }
}

}  // namespace dpsbm

#endif  // DPSBM_MATRIX_H_
