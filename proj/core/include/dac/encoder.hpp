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
#include <span>
#include <vector>

#include "dac/data.hpp"
#include "dac/matrix.hpp"
#include "dac/random.hpp"

namespace dac {

/// Dense tanh representation layer followed by a linear classification head.
///
///   features = tanh(z * hidden_w + hidden_b)        (N x d_in -> N x dim)
///   logits   = features * head_w + head_b            (N x dim  -> N x k)
///
/// A model whose head has been discarded (k() == 0) can still encode.
struct EncoderModel {
  Matrix hidden_w;  // d_in x dim
  std::vector<double> hidden_b;
  Matrix head_w;    // dim x k
  std::vector<double> head_b;

  std::size_t d_in() const noexcept { return hidden_w.rows(); }
  std::size_t dim() const noexcept { return hidden_w.cols(); }
  std::size_t k() const noexcept { return head_w.cols(); }
  bool has_head() const noexcept { return k() > 0; }

  friend bool operator==(const EncoderModel&, const EncoderModel&) = default;
};

/// Xavier-uniform weights, zero biases.
EncoderModel init_encoder(std::size_t d_in, std::size_t dim, std::size_t k, std::uint64_t seed);

/// Replaces the head with a freshly initialized one of `k` outputs.
void reset_head(EncoderModel& model, std::size_t k, std::uint64_t seed);
void discard_head(EncoderModel& model);

FeatureMatrix encode(const EncoderModel& model, const FeatureMatrix& z);
Matrix logits(const EncoderModel& model, const FeatureMatrix& features);

/// Mean negative log-softmax at each sample's target; log-sum-exp stabilized.
double cross_entropy(const Matrix& logits, std::span<const int> labels);

struct Gradients {
  Matrix hidden_w;
  std::vector<double> hidden_b;
  Matrix head_w;
  std::vector<double> head_b;
};

/// Analytic gradients of the batch cross-entropy with respect to every
/// parameter block. Writes the batch loss to `loss` when non-null.
Gradients compute_gradients(const EncoderModel& model, const FeatureMatrix& z_batch,
                            std::span<const int> labels, double* loss = nullptr);

/// One plain gradient-descent update; returns the batch loss measured before
/// the update. Throws Errc::divergence on a non-finite loss or gradient and
/// leaves the model untouched in that case.
double grad_step(EncoderModel& model, const FeatureMatrix& z_batch, std::span<const int> labels,
                 double learning_rate);

struct TrainConfig {
  std::size_t batch_size = 128;
  double learning_rate = 5e-3;
  std::size_t epochs_per_round = 1;
  std::size_t hidden_dim = 0;              // 0: same as the input dimension
  std::size_t max_pretrain_epochs = 2000;
  std::size_t pretrain_patience = 10;
  double pretrain_min_delta = 0.0;         // relative loss decrease that counts as improvement
  std::uint64_t seed = 0;
};

/// One shuffled pass over (z, labels) in mini-batches; the last partial batch
/// is kept. Returns the sample-weighted mean batch loss.
double train_epoch(EncoderModel& model, const FeatureMatrix& z, std::span<const int> labels,
                   std::size_t batch_size, double learning_rate, Rng& rng);

double accuracy(const Matrix& logits, std::span<const int> labels);

struct PretrainResult {
  EncoderModel model;          // head discarded
  double train_accuracy = 0;   // labeled-set accuracy, percent, before discarding the head
  double train_loss = 0;
  std::size_t epochs = 0;      // epochs run (best checkpoint is at epochs - patience or earlier)
};

/// Supervised training on the labeled samples of the known classes. Stops once
/// the labeled-set loss has not improved for `pretrain_patience` epochs and
/// returns the lowest-loss checkpoint with its head removed.
PretrainResult pretrain(const SplitDataset& data, const TrainConfig& cfg);

// DACM checkpoints: "DACM", u32 version, u64 d_in, u64 dim, u64 k, then
// hidden_w, hidden_b, head_w, head_b as little-endian binary64, row-major.
inline constexpr std::uint32_t kModelFileVersion = 1;

void save_model(const EncoderModel& model, const std::filesystem::path& path);
EncoderModel load_model(const std::filesystem::path& path);

}  // namespace dac
