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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dac/data.hpp"
#include "dac/pipeline.hpp"

namespace dac::cli {

struct SynthOptions {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t dim = 0;
  double sep = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

struct RunOptions {
  std::string features;
  std::string labels;
  std::string known_classes;  // optional file fixing the known set
  double known_ratio = 0.75;
  double labeled_ratio = 0.1;
  std::string sampling = "per-class";
  std::optional<std::size_t> k;
  std::optional<std::size_t> k_prime;
  std::uint64_t seed = 0;
  std::size_t seeds = 10;
  std::string ablation = "none";
  std::size_t max_rounds = 100;
  std::size_t patience = 10;
  std::size_t batch_size = 128;
  double learning_rate = 5e-3;
  std::size_t hidden_dim = 0;
  bool estimate_on_raw = false;
  bool reseed_kmeans = false;
  bool no_standardize = false;
  std::string out;
  std::string save_model;  // first seed's best checkpoint
  std::string save_pred;   // first seed's predicted cluster ids
};

struct EvalOptions {
  std::string truth;
  std::string pred;
  std::string features;
  bool geometric_nmi = false;
  bool nearest_sample_silhouette = false;
};

struct SweepOptions {
  RunOptions run;
  std::string sweep;
};

/// Outcome of the pipeline for one seed, scored against the full ground truth.
struct SeedOutcome {
  std::uint64_t seed = 0;
  std::size_t k_true = 0;
  std::size_t k_used = 0;
  bool estimated = false;
  double nmi = 0.0;
  double ari = 0.0;
  double acc = 0.0;
  std::size_t rounds = 0;
  std::size_t best_round = 0;
  double best_silhouette = 0.0;
  double pretrain_accuracy = 0.0;
  TrainHistory history;
  LabelVector predicted;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

MeanStd mean_std(const std::vector<double>& xs);

/// Runs the pipeline once per seed (seed, seed+1, ...). Independent seeds are
/// spread over up to DAC_THREADS workers; results keep seed order.
std::vector<SeedOutcome> run_seeds(const FeatureMatrix& features, const LabelVector& truth,
                                   const std::vector<int>& fixed_known, const RunOptions& opts);

/// Worker count: DAC_THREADS if set and positive, else hardware concurrency.
std::size_t worker_count(std::size_t jobs);

int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches to a subcommand. Returns the process exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dac::cli
