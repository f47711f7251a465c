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

#include "dac/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "dac/alignment.hpp"
#include "dac/errors.hpp"

namespace dac {
namespace {

std::vector<std::size_t> compact(const std::vector<int>& ids, std::size_t& n_distinct) {
  std::map<int, std::size_t> index;
  for (int id : ids) index.emplace(id, 0);
  std::size_t next = 0;
  for (auto& [id, slot] : index) slot = next++;
  n_distinct = next;
  std::vector<std::size_t> out(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) out[i] = index[ids[i]];
  return out;
}

void check_pair(const LabelVector& truth, const LabelVector& pred) {
  if (truth.size() != pred.size()) {
    fail(Errc::dimension_mismatch, "label vectors differ in length (" +
                                       std::to_string(truth.size()) + " vs " +
                                       std::to_string(pred.size()) + ")");
  }
  if (truth.size() == 0) fail(Errc::invalid_argument, "empty label vectors");
}

double entropy(const std::vector<std::size_t>& sizes, double n) {
  double h = 0.0;
  for (auto s : sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

double pairs(std::size_t n) { return 0.5 * static_cast<double>(n) * static_cast<double>(n - (n > 0)); }

}  // namespace

Contingency contingency(const LabelVector& truth, const LabelVector& pred) {
  check_pair(truth, pred);
  Contingency c;
  const auto t = compact(truth.ids, c.rows);
  const auto p = compact(pred.ids, c.cols);
  c.counts.assign(c.rows * c.cols, 0);
  for (std::size_t i = 0; i < t.size(); ++i) ++c.counts[t[i] * c.cols + p[i]];
  c.total = t.size();
  return c;
}

double nmi(const LabelVector& truth, const LabelVector& pred, NmiNormalization norm) {
  const Contingency c = contingency(truth, pred);
  if (c.rows == 1 && c.cols == 1) return 1.0;

  const double n = static_cast<double>(c.total);
  std::vector<std::size_t> a(c.rows, 0), b(c.cols, 0);
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      a[i] += c.at(i, j);
      b[j] += c.at(i, j);
    }
  }
  double mi = 0.0;
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      const auto nij = c.at(i, j);
      if (nij == 0) continue;
      const double x = static_cast<double>(nij);
      mi += x / n * std::log(n * x / (static_cast<double>(a[i]) * static_cast<double>(b[j])));
    }
  }
  const double hu = entropy(a, n);
  const double hv = entropy(b, n);
  const double denom = norm == NmiNormalization::arithmetic ? 0.5 * (hu + hv) : std::sqrt(hu * hv);
  if (denom <= 0.0) return 0.0;
  return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(const LabelVector& truth, const LabelVector& pred) {
  const Contingency c = contingency(truth, pred);
  std::vector<std::size_t> a(c.rows, 0), b(c.cols, 0);
  double index = 0.0;
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      a[i] += c.at(i, j);
      b[j] += c.at(i, j);
      index += pairs(c.at(i, j));
    }
  }
  double sum_a = 0.0, sum_b = 0.0;
  for (auto x : a) sum_a += pairs(x);
  for (auto x : b) sum_b += pairs(x);
  const double total = pairs(c.total);
  if (total == 0.0) return 1.0;
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

double acc(const LabelVector& truth, const LabelVector& pred) {
  const Contingency c = contingency(truth, pred);
  const std::size_t m = std::max(c.rows, c.cols);
  std::size_t top = 0;
  for (auto x : c.counts) top = std::max(top, x);
  // Maximizing matched counts == minimizing (top - count) on the padded square.
  Matrix cost(m, m, static_cast<double>(top));
  for (std::size_t i = 0; i < c.rows; ++i) {
    for (std::size_t j = 0; j < c.cols; ++j) {
      cost(j, i) = static_cast<double>(top - c.at(i, j));
    }
  }
  const LinearAssignment matched = hungarian(cost);
  std::size_t hits = 0;
  for (std::size_t j = 0; j < c.cols; ++j) {
    const std::size_t i = matched.assignment[j];
    if (i < c.rows) hits += c.at(i, j);
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(c.total);
}

double silhouette(const FeatureMatrix& features, const LabelVector& labels,
                  SilhouetteVariant variant) {
  if (features.rows() != labels.size()) {
    fail(Errc::dimension_mismatch, "silhouette: feature rows and label count differ");
  }
  for (int id : labels.ids) {
    if (id < 0) fail(Errc::label_out_of_range, "silhouette: unlabeled sample");
  }
  std::size_t k = 0;
  const auto cluster = compact(labels.ids, k);
  if (k < 2) fail(Errc::invalid_argument, "silhouette needs at least 2 clusters");

  const std::size_t n = features.rows();
  std::vector<std::size_t> sizes(k, 0);
  for (auto c : cluster) ++sizes[c];

  const bool nearest = variant == SilhouetteVariant::nearest_sample;
  // sums[i * k + c]: total distance from sample i to cluster c (or, for the
  // nearest-sample variant on other clusters, the minimum distance).
  std::vector<double> sums(n * k, 0.0);
  if (nearest) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < k; ++c) {
        if (c != cluster[i]) sums[i * k + c] = std::numeric_limits<double>::infinity();
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(squared_distance(features.row(i), features.row(j)));
      const auto ci = cluster[i], cj = cluster[j];
      if (ci == cj || !nearest) {
        sums[i * k + cj] += d;
        sums[j * k + ci] += d;
      } else {
        sums[i * k + cj] = std::min(sums[i * k + cj], d);
        sums[j * k + ci] = std::min(sums[j * k + ci], d);
      }
    }
  }

  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto own = cluster[i];
    if (sizes[own] < 2) continue;
    const double a = sums[i * k + own] / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c == own) continue;
      const double v = nearest ? sums[i * k + c] : sums[i * k + c] / static_cast<double>(sizes[c]);
      b = std::min(b, v);
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

double k_error(std::size_t k_true, std::size_t k_pred) {
  if (k_true == 0) fail(Errc::invalid_argument, "k_error needs k_true >= 1");
  const double diff = k_true > k_pred ? static_cast<double>(k_true - k_pred)
                                      : static_cast<double>(k_pred - k_true);
  return std::round(100.0 * 100.0 * diff / static_cast<double>(k_true)) / 100.0;
}

}  // namespace dac
