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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace fs = std::filesystem;
using dac::cli::main_entry;

namespace {

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "dac");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Invocation r;
  r.code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t count_prefix(const std::vector<std::string>& lines, const std::string& prefix) {
  std::size_t n = 0;
  for (const auto& l : lines) n += l.rfind(prefix, 0) == 0;
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dac_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void make_toy(const std::string& prefix) {
    ASSERT_EQ(invoke({"synth", "--k", "4", "--n", "25", "--dim", "6", "--sep", "20", "--seed",
                      "1", "--out", path(prefix)})
                  .code,
              0);
  }

  std::vector<std::string> fast_run_flags() const {
    return {"--max-rounds", "4", "--patience", "2", "--lr", "0.05", "--labeled-ratio", "0.2"};
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, SynthWritesShapeAndIsDeterministic) {
  ASSERT_EQ(invoke({"synth", "--k", "10", "--n", "100", "--dim", "16", "--sep", "20", "--seed",
                    "1", "--out", path("toy")})
                .code,
            0);
  EXPECT_EQ(fs::file_size(path("toy.dacf")), 24u + 1000u * 16u * 4u);
  EXPECT_EQ(lines_of(slurp(path("toy.labels"))).size(), 1000u);

  const std::string dacf = slurp(path("toy.dacf"));
  const std::string labels = slurp(path("toy.labels"));
  ASSERT_EQ(invoke({"synth", "--k", "10", "--n", "100", "--dim", "16", "--sep", "20", "--seed",
                    "1", "--out", path("toy")})
                .code,
            0);
  EXPECT_EQ(slurp(path("toy.dacf")), dacf);
  EXPECT_EQ(slurp(path("toy.labels")), labels);
}

TEST_F(CliTest, SynthMissingKIsAUsageError) {
  const auto r = invoke({"synth", "--n", "10", "--dim", "2", "--sep", "5", "--out", path("x")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(path("x.dacf")));
}

TEST_F(CliTest, RunReportHasSeedRowsAndSummary) {
  make_toy("toy");
  auto args = std::vector<std::string>{"run", "--features", path("toy.dacf"), "--labels",
                                       path("toy.labels"), "--k", "4", "--out", path("rep")};
  for (const auto& f : fast_run_flags()) args.push_back(f);
  const auto r = invoke(args);
  ASSERT_EQ(r.code, 0) << r.err;

  const auto csv = lines_of(slurp(path("rep.csv")));
  EXPECT_EQ(count_prefix(csv, "seed,"), 10u);
  EXPECT_EQ(count_prefix(csv, "mean,"), 1u);
  EXPECT_EQ(count_prefix(csv, "std,"), 1u);
  EXPECT_EQ(count_prefix(csv, "# known_ratio=0.75"), 1u);
  EXPECT_EQ(count_prefix(csv, "# seeds=0 1 2 3 4 5 6 7 8 9"), 1u);

  const auto hist = lines_of(slurp(path("rep.history.csv")));
  EXPECT_GT(count_prefix(hist, "9,"), 0u);
  EXPECT_NE(r.out.find("mean"), std::string::npos);
  EXPECT_EQ(slurp(path("rep.txt")), r.out);
}

TEST_F(CliTest, RunReportsPredictedKWhenEstimating) {
  make_toy("toy");
  auto args = std::vector<std::string>{"run", "--features", path("toy.dacf"), "--labels",
                                       path("toy.labels"), "--kprime", "8", "--seeds", "2",
                                       "--out", path("rep")};
  for (const auto& f : fast_run_flags()) args.push_back(f);
  const auto r = invoke(args);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("predicted K"), std::string::npos);
}

TEST_F(CliTest, RunRejectsBadFlagCombinations) {
  make_toy("toy");
  const auto both = invoke({"run", "--features", path("toy.dacf"), "--labels", path("toy.labels"),
                            "--k", "4", "--kprime", "8", "--out", path("rep")});
  EXPECT_NE(both.code, 0);
  const auto none = invoke({"run", "--features", path("toy.dacf"), "--labels",
                            path("toy.labels"), "--out", path("rep")});
  EXPECT_NE(none.code, 0);
  const auto missing = invoke({"run", "--features", path("absent.dacf"), "--labels",
                               path("toy.labels"), "--k", "4", "--out", path("rep")});
  EXPECT_NE(missing.code, 0);
  EXPECT_NE(missing.err.find("error"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("rep.csv")));
}

TEST_F(CliTest, EvalIdenticalFiles) {
  make_toy("toy");
  const auto r = invoke({"eval", "--truth", path("toy.labels"), "--pred", path("toy.labels")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "NMI\tARI\tACC");
  EXPECT_EQ(lines[1], "1.0000\t1.0000\t100.00");
}

TEST_F(CliTest, EvalWithFeaturesAddsSilhouette) {
  make_toy("toy");
  const auto r = invoke({"eval", "--truth", path("toy.labels"), "--pred", path("toy.labels"),
                         "--features", path("toy.dacf")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out)[0], "NMI\tARI\tACC\tSC");
}

TEST_F(CliTest, EvalLengthMismatchFails) {
  std::ofstream(path("a.labels")) << "x\ny\nx\n";
  std::ofstream(path("b.labels")) << "x\ny\n";
  const auto r = invoke({"eval", "--truth", path("a.labels"), "--pred", path("b.labels")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST_F(CliTest, SweepRowCounts) {
  make_toy("toy");
  for (const auto& [mode, rows] : {std::pair<std::string, std::size_t>{"known-ratio", 3},
                                   std::pair<std::string, std::size_t>{"kprime", 4}}) {
    auto args = std::vector<std::string>{"sweep",  "--features", path("toy.dacf"),
                                         "--labels", path("toy.labels"), "--sweep", mode,
                                         "--seeds", "2", "--out", path("sw_" + mode)};
    for (const auto& f : fast_run_flags()) args.push_back(f);
    const auto r = invoke(args);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = lines_of(slurp(path("sw_" + mode + ".csv")));
    std::size_t data_rows = 0;
    for (const auto& l : csv) data_rows += !l.empty() && l[0] != '#' && l.rfind("setting,", 0) != 0;
    EXPECT_EQ(data_rows, rows) << mode;
    EXPECT_EQ(count_prefix(csv, "# command=sweep " + mode), 1u);
  }
}
