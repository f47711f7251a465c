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

#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dac/errors.hpp"
#include "dac/metrics.hpp"

namespace dac::cli {
namespace {

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

LabeledSampling parse_sampling(const std::string& s) {
  if (s == "per-class") return LabeledSampling::per_class;
  if (s == "global") return LabeledSampling::global;
  fail(Errc::invalid_argument, "--sampling must be per-class or global");
}

RunConfig make_run_config(const RunOptions& opts, std::uint64_t seed) {
  if (opts.ablation != "none" && opts.ablation != "reinit") {
    fail(Errc::invalid_argument, "--ablation must be none or reinit");
  }
  RunConfig cfg;
  cfg.k = opts.k;
  cfg.k_prime = opts.k_prime.value_or(0);
  cfg.max_rounds = opts.max_rounds;
  cfg.patience = opts.patience;
  cfg.seed = seed;
  cfg.strategy = opts.ablation == "reinit" ? PseudoLabelStrategy::reinit : PseudoLabelStrategy::align;
  cfg.estimate_on_raw = opts.estimate_on_raw;
  cfg.reseed_kmeans = opts.reseed_kmeans;
  cfg.standardize = !opts.no_standardize;
  cfg.train.batch_size = opts.batch_size;
  cfg.train.learning_rate = opts.learning_rate;
  cfg.train.hidden_dim = opts.hidden_dim;
  return cfg;
}

SeedOutcome run_one(const FeatureMatrix& features, const LabelVector& truth,
                    const std::vector<int>& fixed_known, const RunOptions& opts,
                    std::uint64_t seed) {
  SplitConfig split_cfg;
  split_cfg.known_ratio = opts.known_ratio;
  split_cfg.labeled_ratio = opts.labeled_ratio;
  split_cfg.seed = seed;
  split_cfg.sampling = parse_sampling(opts.sampling);
  const SplitDataset split = fixed_known.empty()
                                 ? make_split(features, truth, split_cfg)
                                 : make_split(features, truth, fixed_known, split_cfg);

  const RunResult r = run(split, make_run_config(opts, seed));
  SeedOutcome o;
  o.seed = seed;
  o.k_true = static_cast<std::size_t>(truth.num_classes);
  o.k_used = r.k;
  o.estimated = r.estimate.has_value();
  o.nmi = nmi(truth, r.clusters.assignments);
  o.ari = ari(truth, r.clusters.assignments);
  o.acc = acc(truth, r.clusters.assignments);
  o.rounds = r.history.size();
  o.best_round = r.best_round;
  o.best_silhouette = r.history.at(r.best_round - 1).silhouette;
  o.pretrain_accuracy = r.pretrain_accuracy;
  o.history = r.history;
  o.predicted = r.clusters.assignments;
  if (seed == opts.seed && !opts.save_model.empty()) save_model(r.model, opts.save_model);
  return o;
}

void write_flags(std::ostream& os, const RunOptions& o, const std::string& command) {
  os << "# command=" << command << "\n"
     << "# features=" << o.features << "\n"
     << "# labels=" << o.labels << "\n";
  if (!o.known_classes.empty()) os << "# known_classes=" << o.known_classes << "\n";
  os << "# known_ratio=" << o.known_ratio << "\n"
     << "# labeled_ratio=" << o.labeled_ratio << "\n"
     << "# sampling=" << o.sampling << "\n";
  if (o.k) os << "# k=" << *o.k << "\n";
  if (o.k_prime) os << "# kprime=" << *o.k_prime << "\n";
  os << "# ablation=" << o.ablation << "\n"
     << "# max_rounds=" << o.max_rounds << "\n"
     << "# patience=" << o.patience << "\n"
     << "# batch_size=" << o.batch_size << "\n"
     << "# lr=" << o.learning_rate << "\n"
     << "# hidden_dim=" << o.hidden_dim << "\n"
     << "# estimate_on_raw=" << o.estimate_on_raw << "\n"
     << "# reseed_kmeans=" << o.reseed_kmeans << "\n"
     << "# standardize=" << !o.no_standardize << "\n"
     << "# seeds=";
  for (std::size_t i = 0; i < o.seeds; ++i) os << (i ? " " : "") << o.seed + i;
  os << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) fail(Errc::io_error, "cannot open " + path + " for writing");
  return os;
}

struct Summary {
  MeanStd nmi, ari, acc, k_used;
};

Summary summarize(const std::vector<SeedOutcome>& rows) {
  std::vector<double> nmi, ari, accs, ks;
  for (const auto& r : rows) {
    nmi.push_back(r.nmi);
    ari.push_back(r.ari);
    accs.push_back(r.acc);
    ks.push_back(static_cast<double>(r.k_used));
  }
  return {mean_std(nmi), mean_std(ari), mean_std(accs), mean_std(ks)};
}

void validate_run(const RunOptions& o) {
  if (o.seeds == 0) fail(Errc::invalid_argument, "--seeds must be positive");
  if (!o.k && !o.k_prime) fail(Errc::invalid_argument, "one of --k or --kprime is required");
  if (o.k && o.k_prime) fail(Errc::invalid_argument, "--k and --kprime are mutually exclusive");
}

struct Dataset {
  FeatureMatrix features;
  LabelFile labels;
  std::vector<int> known;
};

Dataset load_dataset(const RunOptions& o) {
  Dataset d;
  d.features = load_features(o.features);
  d.labels = load_labels(o.labels);
  if (d.features.rows() != d.labels.labels.size()) {
    fail(Errc::dimension_mismatch, "feature file has " + std::to_string(d.features.rows()) +
                                       " rows but label file has " +
                                       std::to_string(d.labels.labels.size()) + " lines");
  }
  if (!o.known_classes.empty()) d.known = load_known_classes(o.known_classes, d.labels.names);
  return d;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - out.mean) * (x - out.mean);
  out.std = std::sqrt(var / static_cast<double>(xs.size()));
  return out;
}

std::size_t worker_count(std::size_t jobs) {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("DAC_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::min(n, jobs));
}

std::vector<SeedOutcome> run_seeds(const FeatureMatrix& features, const LabelVector& truth,
                                   const std::vector<int>& fixed_known, const RunOptions& opts) {
  std::vector<SeedOutcome> rows(opts.seeds);
  std::vector<std::exception_ptr> errors(opts.seeds);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < opts.seeds; i = next++) {
      try {
        rows[i] = run_one(features, truth, fixed_known, opts, opts.seed + i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = worker_count(opts.seeds);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

int cmd_synth(const SynthOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SyntheticData data = gen_synthetic({o.k, o.n, o.dim, o.sep, o.seed});
    std::vector<std::string> names;
    for (std::size_t c = 0; c < o.k; ++c) names.push_back("class_" + std::to_string(c));
    save_features(data.features, o.out + ".dacf");
    save_labels(data.labels, names, o.out + ".labels");
    out << "wrote " << o.out << ".dacf (" << data.features.rows() << "x" << data.features.cols()
        << ") and " << o.out << ".labels\n";
    return 0;
  });
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate_run(o);
    const Dataset d = load_dataset(o);
    const auto rows = run_seeds(d.features, d.labels.labels, d.known, o);
    const Summary s = summarize(rows);
    const bool estimated = !rows.empty() && rows.front().estimated;

    {
      auto csv = open_out(o.out + ".csv");
      write_flags(csv, o, "run");
      csv << "row,seed,k_true,k,k_error,nmi,ari,acc,rounds,best_round,best_silhouette,"
             "pretrain_acc\n";
      for (const auto& r : rows) {
        csv << "seed," << r.seed << ',' << r.k_true << ',' << r.k_used << ','
            << (estimated ? fixed(k_error(r.k_true, r.k_used), 2) : "") << ','
            << fixed(r.nmi, 6) << ',' << fixed(r.ari, 6) << ',' << fixed(r.acc, 4) << ','
            << r.rounds << ',' << r.best_round << ',' << fixed(r.best_silhouette, 6) << ','
            << fixed(r.pretrain_accuracy, 2) << "\n";
      }
      csv << "mean,,," << fixed(s.k_used.mean, 2) << ",," << fixed(s.nmi.mean, 6) << ','
          << fixed(s.ari.mean, 6) << ',' << fixed(s.acc.mean, 4) << ",,,,\n";
      csv << "std,,," << fixed(s.k_used.std, 2) << ",," << fixed(s.nmi.std, 6) << ','
          << fixed(s.ari.std, 6) << ',' << fixed(s.acc.std, 4) << ",,,,\n";
      if (!csv) fail(Errc::io_error, "write failed for " + o.out + ".csv");
    }
    {
      auto hist = open_out(o.out + ".history.csv");
      write_flags(hist, o, "run");
      hist << "seed,round,silhouette,kmeans_objective,label_change_fraction,alignment_cost,"
              "train_loss\n";
      for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.history.size(); ++i) {
          const auto& h = r.history[i];
          hist << r.seed << ',' << i + 1 << ',' << fixed(h.silhouette, 6) << ','
               << fixed(h.kmeans_objective, 6) << ',' << fixed(h.label_change_fraction, 6) << ','
               << fixed(h.alignment_cost, 6) << ',' << fixed(h.train_loss, 6) << "\n";
        }
      }
      if (!hist) fail(Errc::io_error, "write failed for " + o.out + ".history.csv");
    }

    std::ostringstream text;
    write_flags(text, o, "run");
    const auto cell = [](double v) {
      std::ostringstream c;
      c << std::right << std::setw(9) << fixed(v, 2);
      return c.str();
    };
    text << "\n" << std::left << std::setw(10) << "seed" << std::setw(6) << "K" << std::right
         << std::setw(9) << "NMI" << std::setw(9) << "ARI" << std::setw(9) << "ACC" << "\n";
    for (const auto& r : rows) {
      text << std::left << std::setw(10) << r.seed << std::setw(6) << r.k_used
           << cell(100 * r.nmi) << cell(100 * r.ari) << cell(r.acc) << "\n";
    }
    text << std::left << std::setw(10) << "mean" << std::setw(6) << fixed(s.k_used.mean, 1)
         << cell(100 * s.nmi.mean) << cell(100 * s.ari.mean) << cell(s.acc.mean) << "\n"
         << std::left << std::setw(10) << "std" << std::setw(6) << fixed(s.k_used.std, 1)
         << cell(100 * s.nmi.std) << cell(100 * s.ari.std) << cell(s.acc.std) << "\n";
    if (estimated) {
      text << "predicted K " << fixed(s.k_used.mean, 2) << " (true "
           << rows.front().k_true << ", error "
           << fixed(k_error(rows.front().k_true,
                            static_cast<std::size_t>(std::lround(s.k_used.mean))), 2)
           << "%)\n";
    }
    {
      auto txt = open_out(o.out + ".txt");
      txt << text.str();
      if (!txt) fail(Errc::io_error, "write failed for " + o.out + ".txt");
    }
    if (!o.save_pred.empty()) {
      std::vector<std::string> names;
      for (int c = 0; c < rows.front().predicted.num_classes; ++c) {
        names.push_back("cluster_" + std::to_string(c));
      }
      save_labels(rows.front().predicted, names, o.save_pred);
    }
    out << text.str();
    return 0;
  });
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const LabelFile truth = load_labels(o.truth);
    const LabelFile pred = load_labels(o.pred);
    const auto norm = o.geometric_nmi ? NmiNormalization::geometric : NmiNormalization::arithmetic;
    const double n = nmi(truth.labels, pred.labels, norm);
    const double a = ari(truth.labels, pred.labels);
    const double c = acc(truth.labels, pred.labels);
    std::string header = "NMI\tARI\tACC";
    std::string values = fixed(n, 4) + "\t" + fixed(a, 4) + "\t" + fixed(c, 2);
    if (!o.features.empty()) {
      const FeatureMatrix f = load_features(o.features);
      const auto variant = o.nearest_sample_silhouette ? SilhouetteVariant::nearest_sample
                                                       : SilhouetteVariant::mean_nearest_cluster;
      header += "\tSC";
      values += "\t" + fixed(silhouette(f, pred.labels, variant), 4);
    }
    out << header << "\n" << values << "\n";
    return 0;
  });
}

int cmd_sweep(const SweepOptions& so, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    RunOptions base = so.run;
    if (base.seeds == 0) fail(Errc::invalid_argument, "--seeds must be positive");
    const Dataset d = load_dataset(base);
    const auto k_true = static_cast<std::size_t>(d.labels.labels.num_classes);

    struct Setting {
      std::string label;
      RunOptions opts;
    };
    std::vector<Setting> settings;
    if (so.sweep == "known-ratio") {
      for (double r : {0.25, 0.5, 0.75}) {
        RunOptions o = base;
        o.known_ratio = r;
        if (!o.k_prime) o.k = o.k.value_or(k_true);
        settings.push_back({fixed(r, 2), o});
      }
    } else if (so.sweep == "kprime") {
      for (std::size_t m = 1; m <= 4; ++m) {
        RunOptions o = base;
        o.k.reset();
        o.k_prime = m * k_true;
        settings.push_back({std::to_string(m) + "x", o});
      }
    } else {
      fail(Errc::invalid_argument, "--sweep must be known-ratio or kprime");
    }

    std::ostringstream table;
    table << "setting,value,nmi_mean,nmi_std,ari_mean,ari_std,acc_mean,acc_std,k_mean,k_std\n";
    for (const auto& s : settings) {
      const auto rows = run_seeds(d.features, d.labels.labels, d.known, s.opts);
      const Summary sum = summarize(rows);
      const std::string value =
          so.sweep == "kprime" ? std::to_string(*s.opts.k_prime) : s.label;
      table << (so.sweep == "kprime" ? s.label : "known_ratio") << ',' << value << ','
            << fixed(sum.nmi.mean, 6) << ',' << fixed(sum.nmi.std, 6) << ','
            << fixed(sum.ari.mean, 6) << ',' << fixed(sum.ari.std, 6) << ','
            << fixed(sum.acc.mean, 4) << ',' << fixed(sum.acc.std, 4) << ','
            << fixed(sum.k_used.mean, 2) << ',' << fixed(sum.k_used.std, 2) << "\n";
    }
    auto csv = open_out(base.out + ".csv");
    write_flags(csv, base, "sweep " + so.sweep);
    csv << table.str();
    if (!csv) fail(Errc::io_error, "write failed for " + base.out + ".csv");
    out << table.str();
    return 0;
  });
}

namespace {

void add_run_flags(CLI::App* cmd, RunOptions& o, bool k_flags) {
  cmd->add_option("--features", o.features, "DACF feature file")->required();
  cmd->add_option("--labels", o.labels, "label file, one class name per line")->required();
  cmd->add_option("--known-classes", o.known_classes, "file listing the known classes");
  cmd->add_option("--known-ratio", o.known_ratio, "fraction of classes treated as known")
      ->capture_default_str();
  cmd->add_option("--labeled-ratio", o.labeled_ratio, "fraction of known-class samples labeled")
      ->capture_default_str();
  cmd->add_option("--sampling", o.sampling, "labeled sampling: per-class or global")
      ->capture_default_str();
  if (k_flags) {
    cmd->add_option("--k", o.k, "number of clusters");
    cmd->add_option("--kprime", o.k_prime, "over-provisioned K' for estimating K");
  }
  cmd->add_option("--seed", o.seed, "first seed")->capture_default_str();
  cmd->add_option("--seeds", o.seeds, "number of seeds to average over")->capture_default_str();
  cmd->add_option("--ablation", o.ablation, "none or reinit")->capture_default_str();
  cmd->add_option("--max-rounds", o.max_rounds)->capture_default_str();
  cmd->add_option("--patience", o.patience)->capture_default_str();
  cmd->add_option("--batch-size", o.batch_size)->capture_default_str();
  cmd->add_option("--lr", o.learning_rate)->capture_default_str();
  cmd->add_option("--hidden-dim", o.hidden_dim, "0 keeps the input dimension")
      ->capture_default_str();
  cmd->add_flag("--estimate-raw", o.estimate_on_raw, "estimate K on input features");
  cmd->add_flag("--reseed-kmeans", o.reseed_kmeans, "fresh k-means seed every round");
  cmd->add_flag("--no-standardize", o.no_standardize, "skip column z-scoring");
  cmd->add_option("--out", o.out, "report path prefix")->required();
}

}  // namespace

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deep aligned clustering: pre-training, K estimation and aligned pseudo-labeling"};
  app.require_subcommand(1);

  SynthOptions synth;
  auto* s = app.add_subcommand("synth", "write a synthetic Gaussian-mixture dataset");
  s->add_option("--k", synth.k, "number of clusters")->required();
  s->add_option("--n", synth.n, "samples per cluster")->required();
  s->add_option("--dim", synth.dim, "feature dimension")->required();
  s->add_option("--sep", synth.sep, "radius of the sphere holding the centers")->required();
  s->add_option("--seed", synth.seed)->capture_default_str();
  s->add_option("--out", synth.out, "output prefix (.dacf and .labels)")->required();

  RunOptions run_opts;
  auto* r = app.add_subcommand("run", "run the pipeline over several seeds and write a report");
  add_run_flags(r, run_opts, true);
  r->add_option("--save-model", run_opts.save_model, "DACM checkpoint of the first seed");
  r->add_option("--save-pred", run_opts.save_pred, "predicted cluster ids of the first seed");

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "score predicted labels against ground truth");
  e->add_option("--truth", eval.truth, "ground-truth label file")->required();
  e->add_option("--pred", eval.pred, "predicted label file")->required();
  e->add_option("--features", eval.features, "DACF features for the silhouette score");
  e->add_flag("--geometric-nmi", eval.geometric_nmi, "normalize NMI by the geometric mean");
  e->add_flag("--nearest-sample-sc", eval.nearest_sample_silhouette,
              "silhouette separation from the single nearest outside sample");

  SweepOptions sweep;
  auto* w = app.add_subcommand("sweep", "known-ratio or K' sweep");
  add_run_flags(w, sweep.run, true);
  w->add_option("--sweep", sweep.sweep, "known-ratio or kprime")
      ->required()
      ->check(CLI::IsMember({"known-ratio", "kprime"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& pe) {
    return app.exit(pe, out, err);
  }

  if (*s) return cmd_synth(synth, out, err);
  if (*r) return cmd_run(run_opts, out, err);
  if (*e) return cmd_eval(eval, out, err);
  return cmd_sweep(sweep, out, err);
}

}  // namespace dac::cli
