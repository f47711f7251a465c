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
#include <filesystem>
#include <string>
#include <vector>

#include "dac/matrix.hpp"

namespace dac {

// DACF feature files: "DACF", u32 version, u64 n_samples, u64 dim, then
// n_samples * dim little-endian IEEE-754 binary32 values, row-major.
inline constexpr std::uint32_t kFeatureFileVersion = 1;
inline constexpr std::size_t kFeatureHeaderBytes = 4 + 4 + 8 + 8;

FeatureMatrix load_features(const std::filesystem::path& path);
void save_features(const FeatureMatrix& m, const std::filesystem::path& path);

/// Labels read from a text file, ids assigned in first-appearance order.
struct LabelFile {
  LabelVector labels;
  std::vector<std::string> names;  // names[id]
};

LabelFile load_labels(const std::filesystem::path& path);
void save_labels(const LabelVector& labels, const std::vector<std::string>& names,
                 const std::filesystem::path& path);

/// Reads a known-class file (one class name per line) and resolves the names
/// against an already-loaded label mapping.
std::vector<int> load_known_classes(const std::filesystem::path& path,
                                    const std::vector<std::string>& names);

enum class LabeledSampling { per_class, global };

struct SplitConfig {
  double known_ratio = 0.75;
  double labeled_ratio = 0.1;
  std::uint64_t seed = 0;
  LabeledSampling sampling = LabeledSampling::per_class;
};

struct SplitDataset {
  FeatureMatrix features;
  LabelVector truth;                   // evaluation only
  std::vector<std::uint8_t> labeled;   // 1 = label visible to training
  std::vector<int> known_classes;      // sorted ascending
  std::uint64_t seed = 0;

  std::size_t num_samples() const noexcept { return features.rows(); }
  std::size_t num_labeled() const noexcept;
  std::vector<std::size_t> labeled_indices() const;
};

/// round(known_ratio * n_classes), halves rounded up.
std::size_t known_class_count(std::size_t n_classes, double known_ratio);

SplitDataset make_split(FeatureMatrix features, LabelVector truth, const SplitConfig& cfg);

/// Same as above with a fixed known-class set instead of a random draw.
SplitDataset make_split(FeatureMatrix features, LabelVector truth, std::vector<int> known_classes,
                        const SplitConfig& cfg);

struct SyntheticConfig {
  std::size_t k = 10;
  std::size_t n_per_cluster = 100;
  std::size_t dim = 16;
  double separation = 20.0;
  std::uint64_t seed = 0;
};

struct SyntheticData {
  FeatureMatrix features;
  LabelVector labels;
};

/// Isotropic unit-variance Gaussian blobs around centers drawn uniformly on
/// the sphere of radius `separation`. Rows are grouped by cluster.
SyntheticData gen_synthetic(const SyntheticConfig& cfg);

}  // namespace dac
