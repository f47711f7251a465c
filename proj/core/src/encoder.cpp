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

#include "dac/encoder.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>

#include "dac/errors.hpp"

namespace dac {
namespace {

// tanh rounds to exactly +-1 in double precision beyond |x| ~ 19; keep
// activations strictly inside the open interval.
const double kMaxActivation = std::nextafter(1.0, 0.0);

void xavier_fill(Matrix& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  std::uniform_real_distribution<double> dist(-limit, limit);
  for (auto& v : w.values()) v = dist(rng);
}

bool finite(std::span<const double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

void check_labels(std::span<const int> labels, std::size_t k) {
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= k) {
      fail(Errc::label_out_of_range,
           "target " + std::to_string(y) + " outside [0, " + std::to_string(k) + ")");
    }
  }
}

// Row-wise log-sum-exp.
double log_sum_exp(std::span<const double> row) {
  const double top = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double v : row) sum += std::exp(v - top);
  return top + std::log(sum);
}

template <typename T>
void put_le(std::vector<char>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

std::uint64_t get_le(const char* p, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return v;
}

}  // namespace

EncoderModel init_encoder(std::size_t d_in, std::size_t dim, std::size_t k, std::uint64_t seed) {
  if (d_in == 0 || dim == 0) fail(Errc::invalid_argument, "encoder dimensions must be positive");
  EncoderModel model;
  model.hidden_w = Matrix(d_in, dim);
  model.hidden_b.assign(dim, 0.0);
  Rng rng(seed);
  xavier_fill(model.hidden_w, rng);
  if (k > 0) {
    reset_head(model, k, mix_seed(seed, stream::head_init));
  }
  return model;
}

void reset_head(EncoderModel& model, std::size_t k, std::uint64_t seed) {
  if (k == 0) fail(Errc::invalid_argument, "classifier head needs at least one output");
  model.head_w = Matrix(model.dim(), k);
  model.head_b.assign(k, 0.0);
  Rng rng(seed);
  xavier_fill(model.head_w, rng);
}

void discard_head(EncoderModel& model) {
  model.head_w = Matrix(model.dim(), 0);
  model.head_b.clear();
}

FeatureMatrix encode(const EncoderModel& model, const FeatureMatrix& z) {
  if (z.cols() != model.d_in()) {
    fail(Errc::dimension_mismatch, "encoder expects " + std::to_string(model.d_in()) +
                                       " input columns, got " + std::to_string(z.cols()));
  }
  const std::size_t dim = model.dim();
  FeatureMatrix out(z.rows(), dim);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    auto dst = out.row(i);
    std::copy(model.hidden_b.begin(), model.hidden_b.end(), dst.begin());
    const auto src = z.row(i);
    for (std::size_t a = 0; a < src.size(); ++a) {
      const double x = src[a];
      const auto w = model.hidden_w.row(a);
      for (std::size_t j = 0; j < dim; ++j) dst[j] += x * w[j];
    }
    for (auto& v : dst) v = std::clamp(std::tanh(v), -kMaxActivation, kMaxActivation);
  }
  return out;
}

Matrix logits(const EncoderModel& model, const FeatureMatrix& features) {
  if (!model.has_head()) fail(Errc::invalid_argument, "model has no classifier head");
  if (features.cols() != model.dim()) {
    fail(Errc::dimension_mismatch, "classifier expects " + std::to_string(model.dim()) +
                                       " feature columns, got " +
                                       std::to_string(features.cols()));
  }
  const std::size_t k = model.k();
  Matrix out(features.rows(), k);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    auto dst = out.row(i);
    std::copy(model.head_b.begin(), model.head_b.end(), dst.begin());
    const auto src = features.row(i);
    for (std::size_t a = 0; a < src.size(); ++a) {
      const double x = src[a];
      const auto w = model.head_w.row(a);
      for (std::size_t j = 0; j < k; ++j) dst[j] += x * w[j];
    }
  }
  return out;
}

double cross_entropy(const Matrix& logits, std::span<const int> labels) {
  if (logits.rows() != labels.size()) {
    fail(Errc::dimension_mismatch, "logit rows and label count differ");
  }
  if (logits.rows() == 0) fail(Errc::invalid_argument, "cross_entropy of an empty batch");
  check_labels(labels, logits.cols());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    total += log_sum_exp(row) - row[static_cast<std::size_t>(labels[i])];
  }
  return total / static_cast<double>(logits.rows());
}

Gradients compute_gradients(const EncoderModel& model, const FeatureMatrix& z_batch,
                            std::span<const int> labels, double* loss) {
  if (z_batch.rows() == 0) fail(Errc::invalid_argument, "empty batch");
  if (z_batch.rows() != labels.size()) {
    fail(Errc::dimension_mismatch, "batch rows and label count differ");
  }
  const std::size_t n = z_batch.rows();
  const std::size_t d_in = model.d_in();
  const std::size_t dim = model.dim();
  const std::size_t k = model.k();

  const FeatureMatrix hidden = encode(model, z_batch);
  Matrix delta = logits(model, hidden);  // becomes dL/dlogits in place
  check_labels(labels, k);

  double total = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = delta.row(i);
    const auto y = static_cast<std::size_t>(labels[i]);
    const double lse = log_sum_exp(row);
    total += lse - row[y];
    for (auto& v : row) v = std::exp(v - lse) * inv_n;
    row[y] -= inv_n;
  }
  if (loss) *loss = total * inv_n;

  Gradients g;
  g.head_w = Matrix(dim, k);
  g.head_b.assign(k, 0.0);
  g.hidden_w = Matrix(d_in, dim);
  g.hidden_b.assign(dim, 0.0);

  std::vector<double> d_pre(dim);
  for (std::size_t i = 0; i < n; ++i) {
    const auto h = hidden.row(i);
    const auto dl = delta.row(i);
    for (std::size_t a = 0; a < dim; ++a) {
      auto gw = g.head_w.row(a);
      const auto w = model.head_w.row(a);
      double back = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        gw[j] += h[a] * dl[j];
        back += w[j] * dl[j];
      }
      d_pre[a] = back * (1.0 - h[a] * h[a]);
      g.hidden_b[a] += d_pre[a];
    }
    for (std::size_t j = 0; j < k; ++j) g.head_b[j] += dl[j];

    const auto z = z_batch.row(i);
    for (std::size_t b = 0; b < d_in; ++b) {
      auto gw = g.hidden_w.row(b);
      for (std::size_t a = 0; a < dim; ++a) gw[a] += z[b] * d_pre[a];
    }
  }
  return g;
}

double grad_step(EncoderModel& model, const FeatureMatrix& z_batch, std::span<const int> labels,
                 double learning_rate) {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    fail(Errc::invalid_argument, "learning rate must be finite and non-negative");
  }
  double loss = 0.0;
  const Gradients g = compute_gradients(model, z_batch, labels, &loss);
  if (!std::isfinite(loss) || !finite(g.hidden_w.values()) || !finite(g.hidden_b) ||
      !finite(g.head_w.values()) || !finite(g.head_b)) {
    fail(Errc::divergence, "non-finite loss or gradient; reduce the learning rate");
  }
  auto apply = [learning_rate](std::span<double> p, std::span<const double> d) {
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= learning_rate * d[i];
  };
  apply(model.hidden_w.values(), g.hidden_w.values());
  apply(model.hidden_b, g.hidden_b);
  apply(model.head_w.values(), g.head_w.values());
  apply(model.head_b, g.head_b);
  return loss;
}

double train_epoch(EncoderModel& model, const FeatureMatrix& z, std::span<const int> labels,
                   std::size_t batch_size, double learning_rate, Rng& rng) {
  if (batch_size == 0) fail(Errc::invalid_argument, "batch size must be positive");
  if (z.rows() != labels.size()) fail(Errc::dimension_mismatch, "rows and label count differ");
  if (z.rows() == 0) fail(Errc::invalid_argument, "no training samples");

  std::vector<std::size_t> order(z.rows());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  double weighted = 0.0;
  std::vector<int> batch_labels;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t stop = std::min(order.size(), start + batch_size);
    const std::span<const std::size_t> idx(order.data() + start, stop - start);
    const Matrix batch = z.gather_rows(idx);
    batch_labels.clear();
    for (auto i : idx) batch_labels.push_back(labels[i]);
    weighted += grad_step(model, batch, batch_labels, learning_rate) *
                static_cast<double>(idx.size());
  }
  return weighted / static_cast<double>(order.size());
}

double accuracy(const Matrix& logits, std::span<const int> labels) {
  if (logits.rows() != labels.size() || labels.empty()) {
    fail(Errc::dimension_mismatch, "logit rows and label count differ");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto row = logits.row(i);
    const auto best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    hits += best == labels[i];
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(labels.size());
}

PretrainResult pretrain(const SplitDataset& data, const TrainConfig& cfg) {
  const auto idx = data.labeled_indices();
  if (idx.empty()) fail(Errc::no_labeled_samples, "pretraining needs labeled samples");
  if (data.known_classes.empty()) fail(Errc::invalid_argument, "no known classes");

  // Known classes become dense head outputs 0..|known|-1.
  std::vector<int> to_head(static_cast<std::size_t>(std::max(data.truth.num_classes, 0)), -1);
  for (std::size_t j = 0; j < data.known_classes.size(); ++j) {
    to_head[static_cast<std::size_t>(data.known_classes[j])] = static_cast<int>(j);
  }
  std::vector<int> targets;
  std::vector<std::size_t> per_head(data.known_classes.size(), 0);
  for (auto i : idx) {
    const int t = to_head[static_cast<std::size_t>(data.truth[i])];
    if (t < 0) fail(Errc::invalid_argument, "labeled sample outside the known classes");
    targets.push_back(t);
    ++per_head[static_cast<std::size_t>(t)];
  }
  if (std::find(per_head.begin(), per_head.end(), 0) != per_head.end()) {
    fail(Errc::no_labeled_samples, "a known class has no labeled sample");
  }

  const Matrix z = data.features.gather_rows(idx);
  const std::size_t dim = cfg.hidden_dim == 0 ? z.cols() : cfg.hidden_dim;
  EncoderModel model =
      init_encoder(z.cols(), dim, data.known_classes.size(), mix_seed(cfg.seed, stream::encoder_init));
  Rng order_rng(mix_seed(cfg.seed, stream::pretrain_order));

  EncoderModel best = model;
  double best_loss = cross_entropy(logits(model, encode(model, z)), targets);
  std::size_t since_best = 0;
  std::size_t epochs = 0;
  while (epochs < cfg.max_pretrain_epochs && since_best < cfg.pretrain_patience) {
    train_epoch(model, z, targets, cfg.batch_size, cfg.learning_rate, order_rng);
    ++epochs;
    const double loss = cross_entropy(logits(model, encode(model, z)), targets);
    if (!std::isfinite(loss)) fail(Errc::divergence, "pretraining loss became non-finite");
    if (loss < best_loss * (1.0 - cfg.pretrain_min_delta)) {
      best_loss = loss;
      best = model;
      since_best = 0;
    } else {
      ++since_best;
    }
  }

  PretrainResult out;
  out.train_accuracy = accuracy(logits(best, encode(best, z)), targets);
  out.train_loss = best_loss;
  out.epochs = epochs;
  discard_head(best);
  out.model = std::move(best);
  return out;
}

void save_model(const EncoderModel& model, const std::filesystem::path& path) {
  std::vector<char> bytes = {'D', 'A', 'C', 'M'};
  put_le<std::uint32_t>(bytes, kModelFileVersion);
  put_le<std::uint64_t>(bytes, model.d_in());
  put_le<std::uint64_t>(bytes, model.dim());
  put_le<std::uint64_t>(bytes, model.k());
  auto put_block = [&bytes](std::span<const double> xs) {
    for (double v : xs) put_le<std::uint64_t>(bytes, std::bit_cast<std::uint64_t>(v));
  };
  put_block(model.hidden_w.values());
  put_block(model.hidden_b);
  put_block(model.head_w.values());
  put_block(model.head_b);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::io_error, "write failed for " + path.string());
}

EncoderModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  const std::vector<char> bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  constexpr std::size_t header = 4 + 4 + 8 * 3;
  if (bytes.size() < 4 || std::string_view(bytes.data(), 4) != "DACM") {
    fail(Errc::bad_magic, path.string() + " is not a DACM model file");
  }
  if (bytes.size() < header) fail(Errc::truncated_payload, path.string() + ": header is truncated");
  const char* p = bytes.data();
  if (get_le(p + 4, 4) != kModelFileVersion) {
    fail(Errc::bad_version, path.string() + ": unsupported model version");
  }
  const std::uint64_t d_in = get_le(p + 8, 8);
  const std::uint64_t dim = get_le(p + 16, 8);
  const std::uint64_t k = get_le(p + 24, 8);
  constexpr std::uint64_t kLimit = std::uint64_t{1} << 28;
  if (d_in == 0 || dim == 0 || d_in > kLimit || dim > kLimit || k > kLimit) {
    fail(Errc::shape_mismatch, path.string() + ": invalid model shape");
  }
  const std::uint64_t count = d_in * dim + dim + dim * k + k;
  const std::uint64_t payload = bytes.size() - header;
  if (payload < count * 8) fail(Errc::truncated_payload, path.string() + ": payload truncated");
  if (payload > count * 8) fail(Errc::shape_mismatch, path.string() + ": trailing bytes");

  const char* q = p + header;
  auto next = [&q]() {
    const double v = std::bit_cast<double>(get_le(q, 8));
    q += 8;
    return v;
  };
  EncoderModel model;
  model.hidden_w = Matrix(d_in, dim);
  for (auto& v : model.hidden_w.values()) v = next();
  model.hidden_b.resize(dim);
  for (auto& v : model.hidden_b) v = next();
  model.head_w = Matrix(dim, k);
  for (auto& v : model.head_w.values()) v = next();
  model.head_b.resize(k);
  for (auto& v : model.head_b) v = next();
  if (!model.hidden_w.all_finite() || !finite(model.hidden_b) || !model.head_w.all_finite() ||
      !finite(model.head_b)) {
    fail(Errc::non_finite, path.string() + ": non-finite parameter");
  }
  return model;
}

}  // namespace dac
