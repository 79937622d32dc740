// Copyright 2026 The nlgal Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nlgal/records.h"

#include <cmath>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "nlgal/error.h"
#include "nlgal/rng.h"
#include "test_support.h"

namespace nlgal {
namespace {

using testing::TempDir;

std::vector<RunRecord> seed_run(const std::string& strategy, std::uint64_t seed, std::size_t iterations = 18) {
  std::vector<RunRecord> out;
  std::size_t labeled = 0;
  for (std::size_t i = 0; i <= iterations; ++i) {
    RunRecord r;
    r.dataset = "ds";
    r.strategy = strategy;
    r.seed = seed;
    r.iteration = i;
    if (i > 0) {
      r.selected_ids = {"a" + std::to_string(i), "b,\"" + std::to_string(i)};
      labeled += 2;
      r.strategy_scores = std::unordered_map<ExampleId, double>{{r.selected_ids[0], 0.5}};
    }
    r.labeled_count = labeled;
    r.metric_name = "bleu";
    r.metric_value = 0.1 + 0.01 * static_cast<double>(i) + 1e-17;
    r.wall_time_s = 1.25;
    out.push_back(r);
  }
  return out;
}

TEST(Csv, SplitAndQuote) {
  EXPECT_EQ(split_csv_line("a,\"b,c\",\"d\"\"e\","), (std::vector<std::string>{"a", "b,c", "d\"e", ""}));
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("x,y"), "\"x,y\"");
  EXPECT_EQ(csv_field("q\""), "\"q\"\"\"");
}

TEST(Csv, FormatDoubleRoundTrips) {
  Rng rng(3);
  for (int i = 0; i < 2000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.below(30)) - 15);
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
}

TEST(Records, RowRoundTrip) {
  const auto rows = seed_run("random", 3);
  std::stringstream ss;
  ss << kRecordsHeader << '\n';
  for (const auto& r : rows) write_record_row(ss, r, true);
  const auto back = read_records(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].selected_ids, rows[i].selected_ids);
    EXPECT_EQ(back[i].metric_value, rows[i].metric_value);
    EXPECT_EQ(back[i].labeled_count, rows[i].labeled_count);
    EXPECT_EQ(back[i].wall_time_s, 1.25);
  }
}

TEST(Records, MalformedInput) {
  std::stringstream wrong_header("a,b\n");
  EXPECT_THROW(read_records(wrong_header), ParseError);
  std::stringstream short_row(std::string(kRecordsHeader) + "\nds,random,0\n");
  EXPECT_THROW(read_records(short_row), ParseError);
  std::stringstream bad_seed(std::string(kRecordsHeader) + "\nds,random,x,0,0,bleu,0.1,,0\n");
  EXPECT_THROW(read_records(bad_seed), ParseError);
}

TEST(Persist, WritesAllRowsForTwoStrategies) {
  TempDir dir;
  const auto a = seed_run("random", 0), b = seed_run("coreset", 0);
  EXPECT_EQ(persist(a, dir.path()), 19u);
  EXPECT_EQ(persist(b, dir.path()), 19u);
  const auto all = read_records(dir.path() / kRecordsFile);
  EXPECT_EQ(all.size(), 38u);
  for (const auto& r : all) EXPECT_EQ(r.wall_time_s, 0.0);
  const auto timings = testing::read_file(dir.path() / kTimingsFile);
  EXPECT_NE(timings.find(",1.25\n"), std::string::npos);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / kSelectionScoresFile));
}

TEST(Persist, DuplicatesNeedResume) {
  TempDir dir;
  const auto a = seed_run("random", 0);
  persist(a, dir.path());
  EXPECT_THROW(persist(a, dir.path()), Error);
  EXPECT_EQ(persist(a, dir.path(), {.resume = true}), 0u);
  EXPECT_EQ(read_records(dir.path() / kRecordsFile).size(), 19u);
}

TEST(Persist, MissingDirectory) {
  TempDir dir;
  const auto target = dir.path() / "nested" / "out";
  EXPECT_THROW(persist(seed_run("random", 0), target), Error);
  EXPECT_EQ(persist(seed_run("random", 0), target, {.create_dir = true}), 19u);
}

TEST(Persist, WallTimeOptIn) {
  TempDir dir;
  persist(seed_run("random", 0), dir.path(), {.record_wall_time = true});
  EXPECT_EQ(read_records(dir.path() / kRecordsFile)[0].wall_time_s, 1.25);
}

TEST(CompletedSeeds, OnlyFullRuns) {
  TempDir dir;
  persist(seed_run("random", 0), dir.path());
  persist(seed_run("random", 1, 5), dir.path());
  const auto done = completed_seeds(dir.path(), 18);
  ASSERT_EQ(done.size(), 1u);
  EXPECT_EQ(done[0], (SeedKey{"ds", "random", 0}));
  EXPECT_TRUE(completed_seeds(dir.path() / "none", 18).empty());
}

TEST(PersistPartial, Appends) {
  TempDir dir;
  const auto part = seed_run("mte", 2, 3);
  persist_partial(part, dir.path() / "p");
  persist_partial(part, dir.path() / "p");
  EXPECT_EQ(read_records(dir.path() / "p" / kPartialRecordsFile).size(), 8u);
}

}  // namespace
}  // namespace nlgal
