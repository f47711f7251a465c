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

#include <cstdint>
#include <vector>

#include "dac/matrix.hpp"

namespace dac {

struct ClusterModel {
  Matrix centroids;          // k x dim
  LabelVector assignments;   // values in [0, k)
  double objective = 0.0;    // mean squared distance to the assigned centroid
  std::size_t n_iter = 0;
  std::vector<double> objective_trace;  // objective after every Lloyd iteration
};

struct KMeansOptions {
  std::size_t max_iter = 100;
  double tol = 1e-4;          // stop when the fraction of changed assignments drops below
  std::size_t restarts = 1;   // best-of-n by objective, ties to the earlier restart
};

/// Lloyd's algorithm from a seeded k-means++ start. Clusters that lose every
/// member are re-seeded with the sample farthest from its current centroid.
ClusterModel kmeans(const FeatureMatrix& features, std::size_t k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Nearest centroid by squared Euclidean distance; ties go to the lowest index.
LabelVector assign(const FeatureMatrix& features, const Matrix& centroids);

double objective(const FeatureMatrix& features, const Matrix& centroids,
                 const LabelVector& assignments);
double objective(const FeatureMatrix& features, const ClusterModel& model);

/// Seeded k-means++ seeding (D^2 sampling).
Matrix kmeanspp_init(const FeatureMatrix& features, std::size_t k, std::uint64_t seed);

}  // namespace dac
