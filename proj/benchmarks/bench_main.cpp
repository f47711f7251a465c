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

#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "dac/alignment.hpp"
#include "dac/data.hpp"
#include "dac/encoder.hpp"
#include "dac/kmeans.hpp"
#include "dac/metrics.hpp"

namespace {

dac::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  dac::Matrix m(rows, cols);
  for (auto& v : m.values()) v = u(rng);
  return m;
}

void BM_Hungarian(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto cost = random_matrix(k, k, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dac::hungarian(cost));
}
BENCHMARK(BM_Hungarian)->RangeMultiplier(2)->Range(8, 256);

void BM_KMeans(benchmark::State& state) {
  const auto syn = dac::gen_synthetic({10, static_cast<std::size_t>(state.range(0)), 16, 5.0, 1});
  for (auto _ : state) benchmark::DoNotOptimize(dac::kmeans(syn.features, 10, 3));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(syn.features.rows()));
}
BENCHMARK(BM_KMeans)->Arg(100)->Arg(1000);

void BM_Silhouette(benchmark::State& state) {
  const auto syn = dac::gen_synthetic({10, static_cast<std::size_t>(state.range(0)), 16, 5.0, 2});
  for (auto _ : state) benchmark::DoNotOptimize(dac::silhouette(syn.features, syn.labels));
}
BENCHMARK(BM_Silhouette)->Arg(50)->Arg(200);

void BM_TrainEpoch(benchmark::State& state) {
  const auto syn = dac::gen_synthetic({10, 100, static_cast<std::size_t>(state.range(0)), 5.0, 3});
  dac::EncoderModel model = dac::init_encoder(syn.features.cols(), syn.features.cols(), 10, 4);
  dac::Rng rng(5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dac::train_epoch(model, syn.features, syn.labels.ids, 128, 1e-3, rng));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(syn.features.rows()));
}
BENCHMARK(BM_TrainEpoch)->Arg(16)->Arg(128);

void BM_LoadFeatures(benchmark::State& state) {
  const auto path = std::filesystem::temp_directory_path() / "dac_bench_features.dacf";
  const auto m = random_matrix(static_cast<std::size_t>(state.range(0)), 768, 6);
  dac::save_features(m, path);
  for (auto _ : state) benchmark::DoNotOptimize(dac::load_features(path));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(m.values().size() * 4));
  std::filesystem::remove(path);
}
BENCHMARK(BM_LoadFeatures)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
