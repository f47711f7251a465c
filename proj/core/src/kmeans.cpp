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

#include "dac/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dac/errors.hpp"
#include "dac/random.hpp"

namespace dac {
namespace {

std::size_t nearest(std::span<const double> x, const Matrix& centroids, double* dist) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.rows(); ++c) {
    const double d = squared_distance(x, centroids.row(c));
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

// Moves the sample farthest from its centroid into every empty cluster. Only
// clusters with at least two members donate, so no new empty cluster appears.
void repair_empty(const FeatureMatrix& x, const Matrix& centroids, std::vector<int>& labels,
                  std::vector<std::size_t>& sizes) {
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] > 0) continue;
    std::size_t pick = labels.size();
    double far = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const auto owner = static_cast<std::size_t>(labels[i]);
      if (sizes[owner] < 2) continue;
      const double d = squared_distance(x.row(i), centroids.row(owner));
      if (d > far) {
        far = d;
        pick = i;
      }
    }
    --sizes[static_cast<std::size_t>(labels[pick])];
    labels[pick] = static_cast<int>(c);
    sizes[c] = 1;
  }
}

void update_centroids(const FeatureMatrix& x, const std::vector<int>& labels,
                      const std::vector<std::size_t>& sizes, Matrix& centroids) {
  std::fill(centroids.values().begin(), centroids.values().end(), 0.0);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto dst = centroids.row(static_cast<std::size_t>(labels[i]));
    const auto src = x.row(i);
    for (std::size_t d = 0; d < src.size(); ++d) dst[d] += src[d];
  }
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    const double inv = 1.0 / static_cast<double>(sizes[c]);
    for (auto& v : centroids.row(c)) v *= inv;
  }
}

ClusterModel lloyd(const FeatureMatrix& x, std::size_t k, std::uint64_t seed,
                   const KMeansOptions& options) {
  const std::size_t n = x.rows();
  ClusterModel model;
  model.centroids = kmeanspp_init(x, k, seed);

  std::vector<int> labels(n, -1);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t iter = 0; iter < std::max<std::size_t>(options.max_iter, 1); ++iter) {
    std::size_t changed = 0;
    std::fill(sizes.begin(), sizes.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = static_cast<int>(nearest(x.row(i), model.centroids, nullptr));
      changed += c != labels[i];
      labels[i] = c;
      ++sizes[static_cast<std::size_t>(c)];
    }
    repair_empty(x, model.centroids, labels, sizes);
    update_centroids(x, labels, sizes, model.centroids);
    model.assignments.ids = labels;
    model.assignments.num_classes = static_cast<int>(k);
    model.objective_trace.push_back(objective(x, model.centroids, model.assignments));
    model.n_iter = iter + 1;
    if (static_cast<double>(changed) / static_cast<double>(n) < options.tol) break;
  }
  model.objective = model.objective_trace.back();
  return model;
}

}  // namespace

LabelVector assign(const FeatureMatrix& features, const Matrix& centroids) {
  if (centroids.rows() == 0) fail(Errc::invalid_argument, "no centroids");
  if (features.cols() != centroids.cols()) {
    fail(Errc::dimension_mismatch, "features have " + std::to_string(features.cols()) +
                                       " columns, centroids " + std::to_string(centroids.cols()));
  }
  LabelVector out;
  out.num_classes = static_cast<int>(centroids.rows());
  out.ids.resize(features.rows());
  for (std::size_t i = 0; i < features.rows(); ++i) {
    out.ids[i] = static_cast<int>(nearest(features.row(i), centroids, nullptr));
  }
  return out;
}

double objective(const FeatureMatrix& features, const Matrix& centroids,
                 const LabelVector& assignments) {
  if (assignments.size() != features.rows() || features.cols() != centroids.cols()) {
    fail(Errc::dimension_mismatch, "objective: features, centroids and assignments disagree");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const int c = assignments[i];
    if (c < 0 || static_cast<std::size_t>(c) >= centroids.rows()) {
      fail(Errc::label_out_of_range, "assignment " + std::to_string(c) + " has no centroid");
    }
    sum += squared_distance(features.row(i), centroids.row(static_cast<std::size_t>(c)));
  }
  return sum / static_cast<double>(features.rows());
}

double objective(const FeatureMatrix& features, const ClusterModel& model) {
  return objective(features, model.centroids, model.assignments);
}

Matrix kmeanspp_init(const FeatureMatrix& x, std::size_t k, std::uint64_t seed) {
  const std::size_t n = x.rows();
  Rng rng(seed);
  Matrix centroids(k, x.cols());

  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::size_t pick = first(rng);
  std::copy(x.row(pick).begin(), x.row(pick).end(), centroids.row(0).begin());

  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(x.row(i), centroids.row(0));

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double v : d2) total += v;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          pick = i;
          break;
        }
      }
      while (d2[pick] == 0.0 && pick > 0) --pick;  // rounding fallback at the tail
    } else {
      pick = first(rng);  // every sample already coincides with a centroid
    }
    std::copy(x.row(pick).begin(), x.row(pick).end(), centroids.row(c).begin());
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(x.row(i), centroids.row(c)));
    }
  }
  return centroids;
}

ClusterModel kmeans(const FeatureMatrix& features, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options) {
  require_features(features, "kmeans");
  if (k < 2 || k > features.rows()) {
    fail(Errc::invalid_argument, "kmeans needs 2 <= k <= n_samples (k = " + std::to_string(k) +
                                     ", n = " + std::to_string(features.rows()) + ")");
  }
  ClusterModel best;
  const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
  for (std::size_t r = 0; r < restarts; ++r) {
    const std::uint64_t s = r == 0 ? seed : mix_seed(seed, 1000 + r);
    ClusterModel candidate = lloyd(features, k, s, options);
    if (r == 0 || candidate.objective < best.objective) best = std::move(candidate);
  }
  return best;
}

}  // namespace dac
