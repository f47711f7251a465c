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

struct LinearAssignment {
  std::vector<std::size_t> assignment;  // row -> column
  double cost = 0.0;                    // sum over rows of cost(row, assignment[row])
};

/// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
/// dual potentials, O(n^3)). Among all optimal matchings the lexicographically
/// smallest assignment vector is returned.
LinearAssignment hungarian(const Matrix& cost);

/// Correspondence between two centroid sets of equal size. `g[last] = current`
/// and aligned labels live in the last-epoch index space.
struct AlignmentMapping {
  std::vector<int> g;
  std::vector<int> g_inv;
  double total_cost = 0.0;

  std::size_t size() const noexcept { return g.size(); }
};

AlignmentMapping identity_mapping(std::size_t k);
AlignmentMapping inverse(const AlignmentMapping& m);

/// Matches every last-epoch centroid to a current-epoch centroid minimizing
/// the total squared Euclidean distance.
AlignmentMapping align_centroids(const Matrix& c_last, const Matrix& c_current);

/// aligned[i] = g_inv[y_current[i]].
LabelVector remap_labels(const LabelVector& y_current, const AlignmentMapping& m);

/// Current centroids reordered into the last-epoch index space:
/// row i of the result is row g[i] of `c_current`.
Matrix reorder_centroids(const Matrix& c_current, const AlignmentMapping& m);

}  // namespace dac
