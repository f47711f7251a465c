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

#include "dac/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "dac/errors.hpp"

namespace dac {
namespace {

struct DualSolution {
  std::vector<std::size_t> row_to_col;
  std::vector<double> u;  // row potentials
  std::vector<double> v;  // column potentials
};

// Shortest augmenting path Hungarian method (1-based internally).
DualSolution solve_dual(const Matrix& a) {
  const std::size_t n = a.rows();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  DualSolution out;
  out.row_to_col.resize(n);
  for (std::size_t j = 1; j <= n; ++j) out.row_to_col[p[j] - 1] = j - 1;
  out.u.assign(u.begin() + 1, u.end());
  out.v.assign(v.begin() + 1, v.end());
  return out;
}

// Every optimal matching uses only zero-reduced-cost edges, so the
// lexicographically smallest optimum is the lexicographically smallest
// perfect matching of that "tight" subgraph. Rows are fixed in order; forcing
// row i onto column j needs an alternating path that hands i's old column to
// j's old owner.
std::vector<std::size_t> lexicographic_tight_matching(const Matrix& a, const DualSolution& dual) {
  const std::size_t n = a.rows();
  double scale = 1.0;
  for (double x : a.values()) scale = std::max(scale, std::abs(x));
  const double eps = 1e-11 * scale * static_cast<double>(n + 1);
  auto tight = [&](std::size_t i, std::size_t j) {
    return std::abs(a(i, j) - dual.u[i] - dual.v[j]) <= eps;
  };

  std::vector<std::size_t> match = dual.row_to_col;
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[match[i]] = i;
  std::vector<char> col_fixed(n, 0);  // fixed columns belong to fixed rows

  std::vector<std::size_t> parent_row(n);
  std::vector<char> seen_row(n);
  std::vector<std::size_t> queue;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (col_fixed[j] || !tight(i, j)) continue;
      if (match[i] == j) break;
      // Re-home row r = owner[j] onto the column c0 = match[i] that i frees.
      const std::size_t r = owner[j];
      const std::size_t c0 = match[i];
      std::fill(seen_row.begin(), seen_row.end(), 0);
      queue.assign(1, r);
      seen_row[r] = 1;
      std::size_t end_row = n;
      for (std::size_t q = 0; q < queue.size() && end_row == n; ++q) {
        const std::size_t row = queue[q];
        for (std::size_t c = 0; c < n; ++c) {
          if (col_fixed[c] || c == j || c == match[row] || !tight(row, c)) continue;
          if (c == c0) {
            end_row = row;
            break;
          }
          const std::size_t next = owner[c];
          if (next == i || seen_row[next]) continue;
          seen_row[next] = 1;
          parent_row[next] = row;
          queue.push_back(next);
        }
      }
      if (end_row == n) continue;
      // Each row on the path takes the column of the row it reached.
      std::size_t row = end_row;
      std::size_t col = c0;
      while (true) {
        const std::size_t old = match[row];
        match[row] = col;
        owner[col] = row;
        if (row == r) break;
        col = old;
        row = parent_row[row];
      }
      match[i] = j;
      owner[j] = i;
      break;
    }
    col_fixed[match[i]] = 1;
  }
  return match;
}

double matching_cost(const Matrix& a, const std::vector<std::size_t>& match) {
  double total = 0.0;
  for (std::size_t i = 0; i < match.size(); ++i) total += a(i, match[i]);
  return total;
}

}  // namespace

LinearAssignment hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    fail(Errc::dimension_mismatch, "hungarian needs a square cost matrix (got " +
                                       std::to_string(cost.rows()) + "x" +
                                       std::to_string(cost.cols()) + ")");
  }
  if (!cost.all_finite()) fail(Errc::non_finite, "hungarian cost matrix has a non-finite entry");
  LinearAssignment out;
  if (cost.rows() == 0) return out;

  const DualSolution dual = solve_dual(cost);
  const double raw = matching_cost(cost, dual.row_to_col);
  out.assignment = lexicographic_tight_matching(cost, dual);
  out.cost = matching_cost(cost, out.assignment);
  if (!(out.cost <= raw)) {
    out.assignment = dual.row_to_col;
    out.cost = raw;
  }
  return out;
}

AlignmentMapping identity_mapping(std::size_t k) {
  AlignmentMapping m;
  m.g.resize(k);
  std::iota(m.g.begin(), m.g.end(), 0);
  m.g_inv = m.g;
  return m;
}

AlignmentMapping inverse(const AlignmentMapping& m) {
  AlignmentMapping out;
  out.g = m.g_inv;
  out.g_inv = m.g;
  out.total_cost = m.total_cost;
  return out;
}

AlignmentMapping align_centroids(const Matrix& c_last, const Matrix& c_current) {
  if (c_last.rows() != c_current.rows() || c_last.cols() != c_current.cols()) {
    fail(Errc::dimension_mismatch, "centroid matrices differ in shape");
  }
  const std::size_t k = c_last.rows();
  Matrix cost(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) cost(i, j) = squared_distance(c_last.row(i), c_current.row(j));
  }
  const LinearAssignment solved = hungarian(cost);
  AlignmentMapping m;
  m.g.resize(k);
  m.g_inv.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    m.g[i] = static_cast<int>(solved.assignment[i]);
    m.g_inv[solved.assignment[i]] = static_cast<int>(i);
  }
  m.total_cost = solved.cost;
  return m;
}

LabelVector remap_labels(const LabelVector& y_current, const AlignmentMapping& m) {
  LabelVector out;
  out.num_classes = static_cast<int>(m.size());
  out.ids.resize(y_current.size());
  for (std::size_t i = 0; i < y_current.size(); ++i) {
    const int y = y_current[i];
    if (y < 0 || static_cast<std::size_t>(y) >= m.size()) {
      fail(Errc::label_out_of_range, "label " + std::to_string(y) + " outside [0, " +
                                         std::to_string(m.size()) + ")");
    }
    out.ids[i] = m.g_inv[static_cast<std::size_t>(y)];
  }
  return out;
}

Matrix reorder_centroids(const Matrix& c_current, const AlignmentMapping& m) {
  if (c_current.rows() != m.size()) fail(Errc::dimension_mismatch, "mapping size differs");
  std::vector<std::size_t> rows(m.g.begin(), m.g.end());
  return c_current.gather_rows(rows);
}

}  // namespace dac
