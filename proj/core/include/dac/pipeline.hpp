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
#include <optional>
#include <vector>

#include "dac/alignment.hpp"
#include "dac/data.hpp"
#include "dac/encoder.hpp"
#include "dac/estimation.hpp"
#include "dac/kmeans.hpp"

namespace dac {

enum class PseudoLabelStrategy {
  align,   // persistent classifier, pseudo-labels aligned to the previous round's centroids
  reinit,  // classifier re-created every round, raw k-means labels as targets
};

struct RunConfig {
  std::optional<std::size_t> k;  // estimated from k_prime when absent
  std::size_t k_prime = 0;
  std::size_t max_rounds = 100;
  std::size_t patience = 10;
  TrainConfig train;
  std::uint64_t seed = 0;
  PseudoLabelStrategy strategy = PseudoLabelStrategy::align;
  bool estimate_on_raw = false;  // estimate K on input features instead of pre-trained ones
  bool standardize = true;       // z-score input columns before anything else
  bool reseed_kmeans = false;    // fresh k-means seed every round
  KMeansOptions kmeans;
};

struct RoundRecord {
  double silhouette = 0.0;
  double kmeans_objective = 0.0;
  double label_change_fraction = 0.0;  // vs. the previous round's training targets
  double alignment_cost = 0.0;
  double train_loss = 0.0;
};

using TrainHistory = std::vector<RoundRecord>;

struct RunResult {
  EncoderModel model;     // best-silhouette checkpoint
  ClusterModel clusters;  // final k-means on the checkpoint's features
  TrainHistory history;
  std::size_t k = 0;
  std::optional<KEstimate> estimate;
  std::size_t best_round = 0;  // 1-based index into history
  double pretrain_accuracy = 0.0;
  std::size_t pretrain_epochs = 0;
};

/// Pre-train on the labeled subset, fix K, then alternate k-means
/// pseudo-labeling and one training pass per round. The checkpoint with the
/// highest silhouette is kept; the loop stops after `patience` rounds without
/// improvement or at `max_rounds`.
RunResult run(const SplitDataset& data, const RunConfig& cfg);

/// `run` with the reinitialization strategy forced on.
RunResult reinit_ablation_run(const SplitDataset& data, const RunConfig& cfg);

/// Column-wise z-scoring; constant columns are only centered.
FeatureMatrix standardize_columns(const FeatureMatrix& x);

}  // namespace dac
