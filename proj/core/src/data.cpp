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

#include "dac/data.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "dac/errors.hpp"
#include "dac/random.hpp"

namespace dac {
namespace {

constexpr std::array<char, 4> kFeatureMagic = {'D', 'A', 'C', 'F'};

template <typename T>
void put_le(std::vector<char>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

template <typename T>
T get_le(const char* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  }
  return static_cast<T>(v);
}

std::vector<char> read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_all(const std::filesystem::path& path, const std::vector<char>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_error, "cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::io_error, "write failed for " + path.string());
}

std::size_t round_half_up(double x) {
  // Products such as 0.35 * 10 land a hair under the half; nudge them back.
  return static_cast<std::size_t>(std::floor(x + 0.5 + 1e-9));
}

}  // namespace

FeatureMatrix load_features(const std::filesystem::path& path) {
  const auto bytes = read_all(path);
  if (bytes.size() < kFeatureMagic.size() ||
      !std::equal(kFeatureMagic.begin(), kFeatureMagic.end(), bytes.begin())) {
    fail(Errc::bad_magic, path.string() + " is not a DACF feature file");
  }
  if (bytes.size() < kFeatureHeaderBytes) {
    fail(Errc::truncated_payload, path.string() + ": header is truncated");
  }
  const char* p = bytes.data();
  const auto version = get_le<std::uint32_t>(p + 4);
  if (version != kFeatureFileVersion) {
    fail(Errc::bad_version, path.string() + ": unsupported version " + std::to_string(version));
  }
  const auto n = get_le<std::uint64_t>(p + 8);
  const auto d = get_le<std::uint64_t>(p + 16);
  if (n == 0 || d == 0 || n > std::numeric_limits<std::uint64_t>::max() / 4 / d) {
    fail(Errc::shape_mismatch, path.string() + ": invalid shape " + std::to_string(n) + "x" +
                                   std::to_string(d));
  }
  const std::uint64_t expected = n * d * 4;
  const std::uint64_t payload = bytes.size() - kFeatureHeaderBytes;
  if (payload < expected) {
    fail(Errc::truncated_payload, path.string() + ": expected " + std::to_string(expected) +
                                      " payload bytes, found " + std::to_string(payload));
  }
  if (payload > expected) {
    fail(Errc::shape_mismatch, path.string() + ": " + std::to_string(payload - expected) +
                                   " bytes beyond the declared " + std::to_string(n) + "x" +
                                   std::to_string(d) + " payload");
  }

  std::vector<double> values(n * d);
  const char* q = p + kFeatureHeaderBytes;
  for (std::size_t i = 0; i < values.size(); ++i, q += 4) {
    const float f = std::bit_cast<float>(get_le<std::uint32_t>(q));
    if (!std::isfinite(f)) {
      fail(Errc::non_finite, path.string() + ": non-finite value at row " +
                                 std::to_string(i / d) + ", column " + std::to_string(i % d));
    }
    values[i] = static_cast<double>(f);
  }
  return FeatureMatrix(n, d, std::move(values));
}

void save_features(const FeatureMatrix& m, const std::filesystem::path& path) {
  require_features(m, "save_features");
  std::vector<char> bytes;
  bytes.reserve(kFeatureHeaderBytes + m.values().size() * 4);
  bytes.insert(bytes.end(), kFeatureMagic.begin(), kFeatureMagic.end());
  put_le<std::uint32_t>(bytes, kFeatureFileVersion);
  put_le<std::uint64_t>(bytes, m.rows());
  put_le<std::uint64_t>(bytes, m.cols());
  for (double v : m.values()) {
    put_le<std::uint32_t>(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  write_all(path, bytes);
}

LabelFile load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());

  LabelFile out;
  std::unordered_map<std::string, int> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      fail(Errc::empty_line, path.string() + ": empty label on line " + std::to_string(line_no));
    }
    auto [it, inserted] = ids.try_emplace(line, static_cast<int>(out.names.size()));
    if (inserted) out.names.push_back(line);
    out.labels.ids.push_back(it->second);
  }
  if (out.labels.ids.empty()) fail(Errc::empty_file, path.string() + " has no labels");
  out.labels.num_classes = static_cast<int>(out.names.size());
  return out;
}

void save_labels(const LabelVector& labels, const std::vector<std::string>& names,
                 const std::filesystem::path& path) {
  std::vector<char> bytes;
  for (int id : labels.ids) {
    if (id < 0 || static_cast<std::size_t>(id) >= names.size()) {
      fail(Errc::label_out_of_range, "label id " + std::to_string(id) + " has no name");
    }
    const auto& name = names[static_cast<std::size_t>(id)];
    bytes.insert(bytes.end(), name.begin(), name.end());
    bytes.push_back('\n');
  }
  write_all(path, bytes);
}

std::vector<int> load_known_classes(const std::filesystem::path& path,
                                    const std::vector<std::string>& names) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open " + path.string());
  std::vector<int> known;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto it = std::find(names.begin(), names.end(), line);
    if (it == names.end()) {
      fail(Errc::invalid_argument, path.string() + ": unknown class '" + line + "'");
    }
    known.push_back(static_cast<int>(it - names.begin()));
  }
  if (known.empty()) fail(Errc::empty_file, path.string() + " lists no classes");
  std::sort(known.begin(), known.end());
  known.erase(std::unique(known.begin(), known.end()), known.end());
  return known;
}

std::size_t SplitDataset::num_labeled() const noexcept {
  return static_cast<std::size_t>(std::count(labeled.begin(), labeled.end(), std::uint8_t{1}));
}

std::vector<std::size_t> SplitDataset::labeled_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labeled.size(); ++i) {
    if (labeled[i]) out.push_back(i);
  }
  return out;
}

std::size_t known_class_count(std::size_t n_classes, double known_ratio) {
  const auto n = round_half_up(known_ratio * static_cast<double>(n_classes));
  return std::clamp<std::size_t>(n, 1, n_classes);
}

SplitDataset make_split(FeatureMatrix features, LabelVector truth, const SplitConfig& cfg) {
  if (!(cfg.known_ratio > 0.0 && cfg.known_ratio <= 1.0)) {
    fail(Errc::invalid_argument, "known_ratio must lie in (0, 1]");
  }
  const auto n_classes = static_cast<std::size_t>(std::max(truth.num_classes, 0));
  if (n_classes < 2) fail(Errc::too_few_classes, "a split needs at least 2 classes");

  std::vector<int> classes(n_classes);
  std::iota(classes.begin(), classes.end(), 0);
  Rng rng(mix_seed(cfg.seed, stream::split));
  std::shuffle(classes.begin(), classes.end(), rng);
  classes.resize(known_class_count(n_classes, cfg.known_ratio));
  std::sort(classes.begin(), classes.end());
  return make_split(std::move(features), std::move(truth), std::move(classes), cfg);
}

SplitDataset make_split(FeatureMatrix features, LabelVector truth, std::vector<int> known_classes,
                        const SplitConfig& cfg) {
  if (!(cfg.labeled_ratio > 0.0 && cfg.labeled_ratio <= 1.0)) {
    fail(Errc::invalid_argument, "labeled_ratio must lie in (0, 1]");
  }
  require_features(features, "make_split");
  if (features.rows() != truth.size()) {
    fail(Errc::dimension_mismatch, "feature rows (" + std::to_string(features.rows()) +
                                       ") differ from label count (" +
                                       std::to_string(truth.size()) + ")");
  }
  if (truth.num_classes < 2) fail(Errc::too_few_classes, "a split needs at least 2 classes");
  const auto counts = label_counts(truth);

  std::sort(known_classes.begin(), known_classes.end());
  known_classes.erase(std::unique(known_classes.begin(), known_classes.end()),
                      known_classes.end());
  if (known_classes.empty()) fail(Errc::invalid_argument, "no known classes");
  std::vector<std::vector<std::size_t>> members(counts.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    members[static_cast<std::size_t>(truth[i])].push_back(i);
  }
  for (int c : known_classes) {
    if (c < 0 || c >= truth.num_classes) {
      fail(Errc::label_out_of_range, "known class " + std::to_string(c) + " out of range");
    }
    if (counts[static_cast<std::size_t>(c)] == 0) {
      fail(Errc::empty_class, "known class " + std::to_string(c) + " has no samples");
    }
  }

  SplitDataset out;
  out.labeled.assign(truth.size(), 0);
  Rng rng(mix_seed(cfg.seed, stream::split + 100));
  if (cfg.sampling == LabeledSampling::per_class) {
    for (int c : known_classes) {
      auto pool = members[static_cast<std::size_t>(c)];
      std::shuffle(pool.begin(), pool.end(), rng);
      const auto take = std::clamp<std::size_t>(
          round_half_up(cfg.labeled_ratio * static_cast<double>(pool.size())), 1, pool.size());
      for (std::size_t j = 0; j < take; ++j) out.labeled[pool[j]] = 1;
    }
  } else {
    std::vector<std::size_t> pool;
    for (int c : known_classes) {
      const auto& m = members[static_cast<std::size_t>(c)];
      pool.insert(pool.end(), m.begin(), m.end());
    }
    std::sort(pool.begin(), pool.end());
    std::shuffle(pool.begin(), pool.end(), rng);
    const auto take = std::clamp<std::size_t>(
        round_half_up(cfg.labeled_ratio * static_cast<double>(pool.size())), 1, pool.size());
    for (std::size_t j = 0; j < take; ++j) out.labeled[pool[j]] = 1;
  }

  out.features = std::move(features);
  out.truth = std::move(truth);
  out.known_classes = std::move(known_classes);
  out.seed = cfg.seed;
  return out;
}

SyntheticData gen_synthetic(const SyntheticConfig& cfg) {
  if (cfg.k < 2) fail(Errc::invalid_argument, "gen_synthetic needs k >= 2");
  if (cfg.n_per_cluster < 1) fail(Errc::invalid_argument, "gen_synthetic needs n_per_cluster >= 1");
  if (cfg.dim < 2) fail(Errc::invalid_argument, "gen_synthetic needs dim >= 2");
  if (!(cfg.separation > 0.0) || !std::isfinite(cfg.separation)) {
    fail(Errc::invalid_argument, "gen_synthetic needs a positive finite separation");
  }

  Rng rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Matrix centers(cfg.k, cfg.dim);
  for (std::size_t c = 0; c < cfg.k; ++c) {
    auto row = centers.row(c);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& v : row) {
        v = normal(rng);
        norm += v * v;
      }
    } while (norm == 0.0);
    const double scale = cfg.separation / std::sqrt(norm);
    for (auto& v : row) v *= scale;
  }

  SyntheticData out;
  out.features = Matrix(cfg.k * cfg.n_per_cluster, cfg.dim);
  out.labels.ids.reserve(cfg.k * cfg.n_per_cluster);
  out.labels.num_classes = static_cast<int>(cfg.k);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cfg.k; ++c) {
    for (std::size_t j = 0; j < cfg.n_per_cluster; ++j, ++r) {
      auto row = out.features.row(r);
      for (std::size_t d = 0; d < cfg.dim; ++d) row[d] = centers(c, d) + normal(rng);
      out.labels.ids.push_back(static_cast<int>(c));
    }
  }
  return out;
}

}  // namespace dac
