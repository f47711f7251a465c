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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "dac/data.hpp"
#include "dac/errors.hpp"
#include "dac/estimation.hpp"

using namespace dac;

namespace {

Matrix two_groups(std::size_t per_group, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit;
  auto n = [&](std::mt19937_64& g) { return spread * unit(g); };
  Matrix x(2 * per_group, 2);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const double cx = i < per_group ? 0.0 : 1000.0;
    x(i, 0) = cx + n(rng);
    x(i, 1) = n(rng);
  }
  return x;
}

}  // namespace

TEST(CountConfident, BalancedSizesKeepEveryCluster) {
  EXPECT_EQ(count_confident_clusters({25, 25, 25, 25}, 100, 4), 4u);
}

TEST(CountConfident, ThresholdIsInclusiveAndUnrounded) {
  // t = 100 / 8 = 12.5
  EXPECT_EQ(count_confident_clusters({13, 12, 12, 13, 12, 13, 12, 13}, 100, 8), 4u);
  // t = 10 / 3 = 3.33...; size 3 falls short, 4 clears it
  EXPECT_EQ(count_confident_clusters({3, 3, 4}, 10, 3), 1u);
  EXPECT_EQ(count_confident_clusters({5, 5}, 10, 2), 2u);
}

TEST(CountConfident, LargestClusterAlwaysCounts) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t kp = 2 + static_cast<std::size_t>(trial) % 9;
    std::vector<std::size_t> sizes(kp);
    std::size_t n = 0;
    for (auto& s : sizes) n += s = rng() % 20;
    if (n == 0) continue;
    EXPECT_GE(count_confident_clusters(sizes, n, kp), 1u);
  }
}

TEST(EstimateK, BalancedBlobsGiveKPrime) {
  const auto syn = gen_synthetic({6, 20, 4, 50.0, 2});
  const auto est = estimate_k(syn.features, 6, 1);
  EXPECT_EQ(est.k, 6u);
  EXPECT_DOUBLE_EQ(est.threshold, 20.0);
}

TEST(EstimateK, TwoDenseGroupsSurviveOverProvisioning) {
  // Zero within-group spread: the surplus clusters can only take stray duplicates.
  const Matrix x = two_groups(50, 0.0, 4);
  const auto est = estimate_k(x, 8, 3);
  EXPECT_DOUBLE_EQ(est.threshold, 12.5);
  EXPECT_EQ(est.k, 2u);
  EXPECT_EQ(std::accumulate(est.cluster_sizes.begin(), est.cluster_sizes.end(), std::size_t{0}),
            100u);
}

TEST(EstimateK, DuplicatingSamplesKeepsK) {
  // Imbalanced, well separated blobs: sizes 40, 40, 10, 5, 5.
  const std::vector<std::size_t> sizes{40, 40, 10, 5, 5};
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.5);
  std::vector<double> rows;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    for (std::size_t i = 0; i < sizes[c]; ++i) {
      rows.push_back(100.0 * static_cast<double>(c) + noise(rng));
      rows.push_back(noise(rng));
    }
  }
  const Matrix x(rows.size() / 2, 2, rows);
  Matrix doubled(x.rows() * 2, 2);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t d = 0; d < 2; ++d) {
      doubled(2 * i, d) = x(i, d);
      doubled(2 * i + 1, d) = x(i, d);
    }
  }
  const auto a = estimate_k(x, 5, 5);
  const auto b = estimate_k(doubled, 5, 5);
  auto sa = a.cluster_sizes;
  auto sb = b.cluster_sizes;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  for (auto& s : sa) s *= 2;
  EXPECT_EQ(sa, sb);
  EXPECT_EQ(a.k, 2u);
  EXPECT_EQ(b.k, 2u);
}

TEST(EstimateK, DeterministicInSeed) {
  const auto syn = gen_synthetic({5, 20, 3, 2.0, 9});
  const auto a = estimate_k(syn.features, 10, 11);
  const auto b = estimate_k(syn.features, 10, 11);
  EXPECT_EQ(a.k, b.k);
  EXPECT_EQ(a.cluster_sizes, b.cluster_sizes);
  EXPECT_EQ(a.clustering.centroids, b.clustering.centroids);
}

TEST(EstimateK, SpreadGroupsSplitEvenly) {
  // With any spread, K' = 8 carves each group of 50 into four pieces near 12.5.
  const Matrix x = two_groups(50, 1.0, 4);
  const auto est = estimate_k(x, 8, 3);
  EXPECT_GE(est.k, 2u);
  for (auto s : est.cluster_sizes) EXPECT_GT(s, 0u);
}

TEST(EstimateK, KPrimeRange) {
  const Matrix x = two_groups(5, 1.0, 1);
  EXPECT_THROW(estimate_k(x, 1, 0), Error);
  EXPECT_THROW(estimate_k(x, 11, 0), Error);
}
