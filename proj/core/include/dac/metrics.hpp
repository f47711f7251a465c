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
#include <vector>

#include "dac/matrix.hpp"

namespace dac {

enum class NmiNormalization { arithmetic, geometric };

/// Normalized mutual information. 1 when both partitions are a single block.
double nmi(const LabelVector& truth, const LabelVector& pred,
           NmiNormalization norm = NmiNormalization::arithmetic);

/// Hubert-Arabie adjusted Rand index. Returns 1 when the index is degenerate
/// (expected index equals the maximum, e.g. both partitions trivial).
double ari(const LabelVector& truth, const LabelVector& pred);

/// Clustering accuracy in percent under the best one-to-one mapping of
/// predicted clusters onto true classes.
double acc(const LabelVector& truth, const LabelVector& pred);

enum class SilhouetteVariant {
  mean_nearest_cluster,  // Rousseeuw: b = min over other clusters of the mean distance
  nearest_sample,        // b = distance to the closest sample outside the cluster
};

/// Mean silhouette over all samples with Euclidean distance. Samples in a
/// singleton cluster contribute 0.
double silhouette(const FeatureMatrix& features, const LabelVector& labels,
                  SilhouetteVariant variant = SilhouetteVariant::mean_nearest_cluster);

/// 100 * |k_true - k_pred| / k_true rounded to two decimals.
double k_error(std::size_t k_true, std::size_t k_pred);

/// Counts n_ij of samples with truth class i and predicted cluster j. Labels
/// are first compacted to 0..m-1 in ascending order of their values.
struct Contingency {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> counts;  // row-major
  std::size_t total = 0;

  std::size_t at(std::size_t i, std::size_t j) const noexcept { return counts[i * cols + j]; }
};

Contingency contingency(const LabelVector& truth, const LabelVector& pred);

}  // namespace dac
