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

#include "dac/kmeans.hpp"

namespace dac {

struct KEstimate {
  std::size_t k = 0;
  double threshold = 0.0;                 // N / K', not rounded
  std::vector<std::size_t> cluster_sizes;  // over the K' clusters
  ClusterModel clustering;
};

inline constexpr std::size_t kEstimateRestarts = 10;

/// Clusters with an over-provisioned K' and counts the clusters whose size
/// reaches the expected mean size N / K'.
KEstimate estimate_k(const FeatureMatrix& features, std::size_t k_prime, std::uint64_t seed,
                     std::size_t restarts = kEstimateRestarts);

/// Number of sizes with size >= n / k_prime.
std::size_t count_confident_clusters(const std::vector<std::size_t>& sizes, std::size_t n,
                                     std::size_t k_prime);

}  // namespace dac
