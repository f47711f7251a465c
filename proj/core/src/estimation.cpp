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

#include "dac/estimation.hpp"

#include <string>

#include "dac/errors.hpp"

namespace dac {

std::size_t count_confident_clusters(const std::vector<std::size_t>& sizes, std::size_t n,
                                     std::size_t k_prime) {
  // |S| >= N/K'  <=>  |S| * K' >= N, kept in integers to avoid rounding.
  std::size_t k = 0;
  for (auto s : sizes) k += s * k_prime >= n;
  return k;
}

KEstimate estimate_k(const FeatureMatrix& features, std::size_t k_prime, std::uint64_t seed,
                     std::size_t restarts) {
  if (k_prime < 2 || k_prime > features.rows()) {
    fail(Errc::invalid_argument, "estimate_k needs 2 <= K' <= n_samples (K' = " +
                                     std::to_string(k_prime) + ")");
  }
  KMeansOptions options;
  options.restarts = restarts;

  KEstimate out;
  out.clustering = kmeans(features, k_prime, seed, options);
  out.cluster_sizes = label_counts(out.clustering.assignments);
  out.threshold = static_cast<double>(features.rows()) / static_cast<double>(k_prime);
  out.k = count_confident_clusters(out.cluster_sizes, features.rows(), k_prime);
  // The largest cluster is never below the mean size, so this cannot fire.
  if (out.k == 0) fail(Errc::degenerate_result, "every cluster fell below the size threshold");
  return out;
}

}  // namespace dac
