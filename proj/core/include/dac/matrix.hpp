/*
 * Copyright (c) 2026, The dacluster Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dac {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return values_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {values_.data() + r * cols_, cols_};
  }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  bool all_finite() const noexcept;

  /// Copies the listed rows, in order, into a new matrix.
  Matrix gather_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// N x D matrix of sample features. Every entry is finite and both
/// dimensions are at least one wherever the library accepts one as input.
using FeatureMatrix = Matrix;

/// Throws Errc::non_finite (or invalid_argument for an empty matrix).
void require_features(const FeatureMatrix& m, const char* what);

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept;

/// Integer class ids with -1 reserved for "unlabeled".
struct LabelVector {
  static constexpr int kUnlabeled = -1;

  std::vector<int> ids;
  int num_classes = 0;

  std::size_t size() const noexcept { return ids.size(); }
  int operator[](std::size_t i) const noexcept { return ids[i]; }

  /// num_classes becomes 1 + the largest id present.
  static LabelVector from_ids(std::vector<int> ids);

  friend bool operator==(const LabelVector&, const LabelVector&) = default;
};

/// Per-label member counts; labels must lie in [0, num_classes).
std::vector<std::size_t> label_counts(const LabelVector& labels);

}  // namespace dac
