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

#include "dac/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dac/errors.hpp"

namespace dac {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  if (values_.size() != rows_ * cols_) {
    fail(Errc::dimension_mismatch, "matrix value count " + std::to_string(values_.size()) +
                                       " does not match " + std::to_string(rows_) + "x" +
                                       std::to_string(cols_));
  }
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Matrix Matrix::gather_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

void require_features(const FeatureMatrix& m, const char* what) {
  if (m.rows() == 0 || m.cols() == 0) {
    fail(Errc::invalid_argument, std::string(what) + ": feature matrix is empty");
  }
  if (!m.all_finite()) {
    fail(Errc::non_finite, std::string(what) + ": feature matrix has a non-finite entry");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double sum = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    sum += diff * diff;
  }
  return sum;
}

LabelVector LabelVector::from_ids(std::vector<int> ids) {
  LabelVector out;
  int top = -1;
  for (int id : ids) top = std::max(top, id);
  out.ids = std::move(ids);
  out.num_classes = top + 1;
  return out;
}

std::vector<std::size_t> label_counts(const LabelVector& labels) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(labels.num_classes, 0)), 0);
  for (int id : labels.ids) {
    if (id < 0 || id >= labels.num_classes) {
      fail(Errc::label_out_of_range, "label " + std::to_string(id) + " outside [0, " +
                                         std::to_string(labels.num_classes) + ")");
    }
    ++counts[static_cast<std::size_t>(id)];
  }
  return counts;
}

}  // namespace dac
