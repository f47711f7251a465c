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

#include <cmath>
#include <filesystem>
#include <random>

#include "dac/encoder.hpp"
#include "dac/errors.hpp"
#include "oracles.hpp"

using namespace dac;

namespace {

EncoderModel identity_model(std::size_t d, std::size_t k) {
  EncoderModel m = init_encoder(d, d, k, 1);
  std::fill(m.hidden_w.values().begin(), m.hidden_w.values().end(), 0.0);
  for (std::size_t i = 0; i < d; ++i) m.hidden_w(i, i) = 1.0;
  std::fill(m.hidden_b.begin(), m.hidden_b.end(), 0.0);
  return m;
}

oracle::Grid to_grid(const Matrix& m) {
  oracle::Grid g(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] = m(i, j);
  }
  return g;
}

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  Matrix m(r, c);
  for (auto& v : m.values()) v = n(rng);
  return m;
}

}  // namespace

TEST(Encode, IdentityOfZeroIsZero) {
  const auto m = identity_model(4, 2);
  const auto out = encode(m, Matrix(1, 4, 0.0));
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(Encode, IdentityIsElementwiseTanh) {
  const auto m = identity_model(1, 2);
  for (double x : {-3.0, -0.5, 0.25, 2.0}) {
    EXPECT_DOUBLE_EQ(encode(m, Matrix(1, 1, {x}))(0, 0), std::tanh(x));
  }
}

TEST(Encode, MatchesDirectRecomputation) {
  std::mt19937_64 rng(8);
  EncoderModel m = init_encoder(5, 3, 0, 4);
  m.hidden_b = {0.3, -0.2, 0.1};
  const Matrix z = random_matrix(6, 5, rng);
  const Matrix out = encode(m, z);
  for (std::size_t i = 0; i < 6; ++i) {
    for (std::size_t a = 0; a < 3; ++a) {
      double s = m.hidden_b[a];
      for (std::size_t b = 0; b < 5; ++b) s += z(i, b) * m.hidden_w(b, a);
      EXPECT_NEAR(out(i, a), std::tanh(s), 1e-12);
    }
  }
}

TEST(Encode, OutputStaysInsideOpenInterval) {
  const auto m = identity_model(2, 2);
  const auto out = encode(m, Matrix(2, 2, {1e6, -1e6, 50.0, -50.0}));
  for (double v : out.values()) {
    EXPECT_LT(v, 1.0);
    EXPECT_GT(v, -1.0);
  }
}

TEST(Encode, DimensionMismatch) {
  const auto m = identity_model(3, 2);
  try {
    encode(m, Matrix(2, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dimension_mismatch);
  }
}

TEST(Logits, ZeroHeadGivesZeroLogits) {
  EncoderModel m = identity_model(3, 4);
  std::fill(m.head_w.values().begin(), m.head_w.values().end(), 0.0);
  const Matrix out = logits(m, Matrix(2, 3, 0.7));
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(Logits, HandComputedTwoClassHead) {
  EncoderModel m = identity_model(2, 2);
  m.head_w = Matrix(2, 2, {1.0, -1.0, 0.5, 2.0});
  m.head_b = {0.25, -0.5};
  const Matrix I(1, 2, {0.2, -0.4});
  const Matrix out = logits(m, I);
  EXPECT_NEAR(out(0, 0), 0.2 * 1.0 + -0.4 * 0.5 + 0.25, 1e-15);
  EXPECT_NEAR(out(0, 1), 0.2 * -1.0 + -0.4 * 2.0 - 0.5, 1e-15);
}

TEST(Logits, BiasShiftIsLinear) {
  std::mt19937_64 rng(2);
  EncoderModel m = init_encoder(3, 3, 4, 9);
  const Matrix I = random_matrix(5, 3, rng, 0.5);
  const Matrix before = logits(m, I);
  for (auto& b : m.head_b) b += 1.5;
  const Matrix after = logits(m, I);
  for (std::size_t i = 0; i < before.values().size(); ++i) {
    EXPECT_NEAR(after.values()[i] - before.values()[i], 1.5, 1e-12);
  }
}

TEST(CrossEntropy, UniformLogitsGiveLogK) {
  for (std::size_t k : {2u, 3u, 7u}) {
    const Matrix l(4, k, 0.3);
    const std::vector<int> y = {0, 1, 1, 0};
    EXPECT_NEAR(cross_entropy(l, y), std::log(static_cast<double>(k)), 1e-15);
  }
}

TEST(CrossEntropy, SaturatedTargetIsNearZero) {
  const Matrix l(1, 3, {0.0, 1000.0, 0.0});
  EXPECT_NEAR(cross_entropy(l, std::vector<int>{1}), 0.0, 1e-9);
}

TEST(CrossEntropy, MatchesDirectSoftmax) {
  const Matrix l(2, 3, {0.5, -1.0, 2.0, 1.5, 0.0, -0.5});
  const std::vector<int> y = {2, 1};
  double expected = 0.0;
  for (std::size_t i = 0; i < 2; ++i) {
    double denom = 0.0;
    for (std::size_t j = 0; j < 3; ++j) denom += std::exp(l(i, j));
    expected -= std::log(std::exp(l(i, static_cast<std::size_t>(y[i]))) / denom);
  }
  EXPECT_NEAR(cross_entropy(l, y), expected / 2.0, 1e-12);
}

TEST(CrossEntropy, ShiftInvariantPerSample) {
  std::mt19937_64 rng(4);
  Matrix l = random_matrix(6, 5, rng, 3.0);
  const std::vector<int> y = {0, 4, 2, 2, 1, 3};
  const double base = cross_entropy(l, y);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  for (std::size_t i = 0; i < l.rows(); ++i) {
    const double s = shift(rng);
    for (auto& v : l.row(i)) v += s;
  }
  EXPECT_NEAR(cross_entropy(l, y), base, 1e-9);
  EXPECT_GE(base, 0.0);
}

TEST(CrossEntropy, LabelOutOfRange) {
  try {
    cross_entropy(Matrix(1, 2), std::vector<int>{2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::label_out_of_range);
  }
}

TEST(Gradients, MatchCentralDifferences) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    EncoderModel m = init_encoder(4, 3, 3, 100 + trial);
    std::normal_distribution<double> n(0.0, 0.3);
    for (auto& b : m.hidden_b) b = n(rng);
    for (auto& b : m.head_b) b = n(rng);
    const Matrix z = random_matrix(4, 4, rng);
    const std::vector<int> y = {0, 2, 1, 2};
    const Gradients g = compute_gradients(m, z, y);

    auto loss = [&] {
      return oracle::mlp_loss(to_grid(z), to_grid(m.hidden_w), m.hidden_b, to_grid(m.head_w),
                              m.head_b, y);
    };
    auto check = [&](std::span<double> params, std::span<const double> grads) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double fd = oracle::central_difference(loss, &params[i], 1e-5);
        const double rel = std::abs(fd - grads[i]) / std::max({std::abs(fd), std::abs(grads[i]), 1e-6});
        EXPECT_LE(rel, 1e-4) << "param " << i << " analytic " << grads[i] << " fd " << fd;
      }
    };
    check(m.hidden_w.values(), g.hidden_w.values());
    check(m.hidden_b, g.hidden_b);
    check(m.head_w.values(), g.head_w.values());
    check(m.head_b, g.head_b);
  }
}

TEST(GradStep, ZeroLearningRateLeavesParameters) {
  std::mt19937_64 rng(1);
  EncoderModel m = init_encoder(3, 3, 2, 5);
  const EncoderModel before = m;
  const Matrix z = random_matrix(4, 3, rng);
  grad_step(m, z, std::vector<int>{0, 1, 0, 1}, 0.0);
  EXPECT_EQ(m, before);
}

TEST(GradStep, SeparableToyConverges) {
  // Two classes split by the sign of the first coordinate.
  std::mt19937_64 rng(6);
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix z(40, 2);
  std::vector<int> y(40);
  for (std::size_t i = 0; i < 40; ++i) {
    y[i] = static_cast<int>(i % 2);
    z(i, 0) = (y[i] ? 2.0 : -2.0) + 0.3 * n(rng);
    z(i, 1) = n(rng);
  }
  EncoderModel m = init_encoder(2, 4, 2, 3);
  double loss = 1.0;
  for (int step = 0; step < 500 && loss >= 0.01; ++step) loss = grad_step(m, z, y, 0.5);
  EXPECT_LT(cross_entropy(logits(m, encode(m, z)), y), 0.01);
}

TEST(GradStep, NonFiniteSignalsDivergence) {
  EncoderModel m = init_encoder(2, 2, 2, 3);
  m.head_w(0, 0) = std::numeric_limits<double>::infinity();
  const EncoderModel before = m;
  try {
    grad_step(m, Matrix(2, 2, {1, 1, 1, 1}), std::vector<int>{0, 1}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::divergence);
  }
  EXPECT_EQ(m.hidden_w, before.hidden_w);
}

TEST(Pretrain, SeparableThreeClassReachesFullAccuracy) {
  const auto syn = gen_synthetic({3, 10, 4, 8.0, 2});
  const auto split = make_split(syn.features, syn.labels, SplitConfig{1.0, 1.0, 0});
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.seed = 4;
  const auto r = pretrain(split, cfg);
  EXPECT_DOUBLE_EQ(r.train_accuracy, 100.0);
  EXPECT_FALSE(r.model.has_head());
  EXPECT_EQ(r.model.dim(), 4u);
}

TEST(Pretrain, NoLabeledSamplesIsAnError) {
  const auto syn = gen_synthetic({3, 5, 2, 8.0, 2});
  auto split = make_split(syn.features, syn.labels, SplitConfig{1.0, 1.0, 0});
  std::fill(split.labeled.begin(), split.labeled.end(), 0);
  try {
    pretrain(split, TrainConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_labeled_samples);
  }
}

TEST(Pretrain, SameSeedIsBitIdentical) {
  const auto syn = gen_synthetic({4, 20, 3, 6.0, 8});
  const auto split = make_split(syn.features, syn.labels, SplitConfig{0.75, 0.3, 1});
  TrainConfig cfg;
  cfg.seed = 12;
  cfg.batch_size = 4;
  cfg.max_pretrain_epochs = 50;
  EXPECT_EQ(pretrain(split, cfg).model, pretrain(split, cfg).model);
}

TEST(Checkpoint, RoundTripsExactly) {
  const auto dir = std::filesystem::temp_directory_path();
  EncoderModel m = init_encoder(5, 3, 4, 77);
  m.hidden_b = {0.1, -0.2, 1e-300};
  save_model(m, dir / "dac_model.dacm");
  EXPECT_EQ(load_model(dir / "dac_model.dacm"), m);
  EXPECT_EQ(std::filesystem::file_size(dir / "dac_model.dacm"),
            32u + 8u * (5 * 3 + 3 + 3 * 4 + 4));

  discard_head(m);
  save_model(m, dir / "dac_model_nohead.dacm");
  const auto back = load_model(dir / "dac_model_nohead.dacm");
  EXPECT_FALSE(back.has_head());
  EXPECT_EQ(back, m);
}
