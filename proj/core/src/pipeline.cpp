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

#include "dac/pipeline.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dac/errors.hpp"
#include "dac/metrics.hpp"

namespace dac {
namespace {

double change_fraction(const std::vector<int>& a, const std::vector<int>& b) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < a.size(); ++i) changed += a[i] != b[i];
  return static_cast<double>(changed) / static_cast<double>(a.size());
}

}  // namespace

FeatureMatrix standardize_columns(const FeatureMatrix& x) {
  const std::size_t n = x.rows();
  FeatureMatrix out = x;
  for (std::size_t d = 0; d < x.cols(); ++d) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += x(i, d);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) var += (x(i, d) - mean) * (x(i, d) - mean);
    const double sd = std::sqrt(var / static_cast<double>(n));
    const double scale = sd > 0.0 ? 1.0 / sd : 1.0;
    for (std::size_t i = 0; i < n; ++i) out(i, d) = (x(i, d) - mean) * scale;
  }
  return out;
}

RunResult run(const SplitDataset& input, const RunConfig& cfg) {
  require_features(input.features, "run");
  if (cfg.patience > cfg.max_rounds) fail(Errc::invalid_argument, "patience exceeds max_rounds");
  if (cfg.max_rounds == 0) fail(Errc::invalid_argument, "max_rounds must be positive");
  if (!cfg.k && cfg.k_prime == 0) fail(Errc::invalid_argument, "either k or k_prime is required");

  SplitDataset scaled;
  const SplitDataset* data = &input;
  if (cfg.standardize) {
    scaled = input;
    scaled.features = standardize_columns(input.features);
    data = &scaled;
  }
  const FeatureMatrix& z = data->features;
  const std::size_t n = z.rows();

  TrainConfig train = cfg.train;
  train.seed = cfg.seed;
  PretrainResult pre = pretrain(*data, train);

  RunResult result;
  result.pretrain_accuracy = pre.train_accuracy;
  result.pretrain_epochs = pre.epochs;
  EncoderModel model = std::move(pre.model);

  if (cfg.k) {
    result.k = *cfg.k;
  } else {
    const FeatureMatrix basis = cfg.estimate_on_raw ? z : encode(model, z);
    result.estimate = estimate_k(basis, cfg.k_prime, mix_seed(cfg.seed, stream::estimate));
    result.k = result.estimate->k;
  }
  const std::size_t k = result.k;
  if (k < 2 || k > n) {
    fail(Errc::degenerate_result, "cluster count " + std::to_string(k) + " is unusable for " +
                                      std::to_string(n) + " samples");
  }

  reset_head(model, k, mix_seed(cfg.seed, stream::head_init));
  const bool align = cfg.strategy == PseudoLabelStrategy::align;
  const std::uint64_t kmeans_seed = mix_seed(cfg.seed, stream::kmeans);
  Rng order(mix_seed(cfg.seed, stream::round_order));

  Matrix stored_centroids;
  std::vector<int> previous_targets;
  EncoderModel best = model;
  double best_sc = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  std::uint64_t best_seed = kmeans_seed;

  for (std::size_t round = 1; round <= cfg.max_rounds && since_best < cfg.patience; ++round) {
    const FeatureMatrix features = encode(model, z);
    const std::uint64_t round_seed =
        cfg.reseed_kmeans ? mix_seed(kmeans_seed, round) : kmeans_seed;
    const ClusterModel km = kmeans(features, k, round_seed, cfg.kmeans);

    RoundRecord rec;
    rec.kmeans_objective = km.objective;
    LabelVector targets;
    if (!align) {
      if (round > 1) reset_head(model, k, mix_seed(cfg.seed, stream::head_reinit + 16 * round));
      targets = km.assignments;
    } else if (round == 1) {
      stored_centroids = km.centroids;
      targets = km.assignments;
    } else {
      const AlignmentMapping m = align_centroids(stored_centroids, km.centroids);
      targets = remap_labels(km.assignments, m);
      stored_centroids = reorder_centroids(km.centroids, m);
      rec.alignment_cost = m.total_cost;
    }
    if (!previous_targets.empty()) {
      rec.label_change_fraction = change_fraction(previous_targets, targets.ids);
    }
    rec.silhouette = silhouette(features, km.assignments);
    if (rec.silhouette > best_sc) {
      best_sc = rec.silhouette;
      best = model;
      result.best_round = round;
      best_seed = round_seed;
      since_best = 0;
    } else {
      ++since_best;
    }

    try {
      for (std::size_t e = 0; e < std::max<std::size_t>(train.epochs_per_round, 1); ++e) {
        rec.train_loss = train_epoch(model, z, targets.ids, train.batch_size, train.learning_rate, order);
      }
    } catch (const Error& err) {
      if (err.code() != Errc::divergence) throw;
      fail(Errc::divergence, "round " + std::to_string(round) + ": " + err.what());
    }
    previous_targets = std::move(targets.ids);
    result.history.push_back(rec);
  }

  result.clusters = kmeans(encode(best, z), k, best_seed, cfg.kmeans);
  result.model = std::move(best);
  return result;
}

RunResult reinit_ablation_run(const SplitDataset& data, const RunConfig& cfg) {
  RunConfig c = cfg;
  c.strategy = PseudoLabelStrategy::reinit;
  return run(data, c);
}

}  // namespace dac
