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

#include "nlgal/config.h"

#include <gtest/gtest.h>

#include "nlgal/error.h"
#include "test_support.h"

namespace nlgal {
namespace {

using nlohmann::json;

json minimal() { return json{{"dataset", {{"train", "d/train.jsonl"}, {"test", "d/test.jsonl"}}}}; }

TEST(Schedule, DefaultShape) {
  const auto s = default_schedule();
  EXPECT_EQ(s.iterations(), 18u);
  EXPECT_EQ(s.total(), 1000u);
  const auto c = s.cumulative();
  ASSERT_EQ(c.size(), 19u);
  std::vector<std::size_t> want = {0};
  for (int i = 1; i <= 10; ++i) want.push_back(20 * static_cast<std::size_t>(i));
  for (int i = 1; i <= 8; ++i) want.push_back(200 + 100 * static_cast<std::size_t>(i));
  EXPECT_EQ(c, want);
  EXPECT_THROW(Schedule{}.validate(), Error);
  EXPECT_THROW((Schedule{{5, 0}}).validate(), Error);
}

TEST(Config, Defaults) {
  const auto c = config_from_json(minimal(), "/base");
  EXPECT_EQ(c.dataset, "train");
  EXPECT_EQ(c.train_path, std::filesystem::path("/base/d/train.jsonl"));
  EXPECT_EQ(c.metric, MetricKind::kBleu);
  EXPECT_EQ(c.strategy, StrategyKind::kRandom);
  EXPECT_EQ(c.schedule, default_schedule());
  EXPECT_EQ(c.pool_cap, 10000u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{0, 1, 2, 3, 4}));
  EXPECT_EQ(c.strategy_params.mc_samples, 10u);
  EXPECT_DOUBLE_EQ(c.strategy_params.idds_lambda, 0.5);
  EXPECT_DOUBLE_EQ(c.metric_config.ibleu_alpha, 0.8);
  EXPECT_EQ(c.eval_mode, EvalMode::kMeanSentence);
  EXPECT_EQ(c.backend.type, BackendConfig::Type::kToy);
  EXPECT_FALSE(c.record_wall_time);
}

TEST(Config, FullRoundTrip) {
  auto j = minimal();
  j["dataset"]["name"] = "para";
  j["metric"] = {{"kind", "ibleu"}, {"ibleu_alpha", 0.7}};
  j["strategy"] = "idds";
  j["strategy_params"] = {{"idds_lambda", 0.25}, {"mc_samples", 4}};
  j["schedule"] = {{"batch_sizes", {5, 5, 10}}};
  j["repetitions"] = 2;
  j["seeds"] = {7, 9};
  j["backend"] = {{"type", "remote"}, {"url", "http://h:1"}};
  j["finetune"] = {{"epochs", 2}};
  j["eval_mode"] = "corpus";
  j["prompt_template"] = "Paraphrase: {input}";
  j["test_size"] = 0;
  const auto c = config_from_json(j, "/x");
  EXPECT_EQ(c.dataset, "para");
  EXPECT_EQ(c.metric, MetricKind::kIbleu);
  EXPECT_DOUBLE_EQ(c.metric_config.ibleu_alpha, 0.7);
  EXPECT_EQ(c.strategy, StrategyKind::kIdds);
  EXPECT_EQ(c.schedule.total(), 20u);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{7, 9}));
  EXPECT_EQ(c.backend.url, "http://h:1");
  EXPECT_EQ(c.finetune.epochs, 2);
  EXPECT_EQ(*c.prompt_template, "Paraphrase: {input}");

  const auto again = config_from_json(to_json(c));
  EXPECT_EQ(to_json(again), to_json(c));
}

TEST(Config, Rejections) {
  auto bad = minimal();
  bad["colour"] = "blue";
  EXPECT_THROW(config_from_json(bad), Error);
  bad = minimal();
  bad["strategy"] = "badge";
  EXPECT_THROW(config_from_json(bad), Error);
  bad = minimal();
  bad["seeds"] = {1, 1, 2, 3, 4};
  EXPECT_THROW(config_from_json(bad), Error);
  bad = minimal();
  bad["repetitions"] = 3;
  bad["seeds"] = {1, 2};
  EXPECT_THROW(config_from_json(bad), Error);
  bad = minimal();
  bad["backend"] = {{"type", "remote"}};
  EXPECT_THROW(config_from_json(bad), Error);
  bad = minimal();
  bad["prompt_template"] = "no placeholder";
  EXPECT_THROW(config_from_json(bad), Error);
  bad = minimal();
  bad["strategy_params"] = {{"mc_samples", 1}};
  EXPECT_THROW(config_from_json(bad), Error);
  bad = minimal();
  bad["pool_cap"] = 0;
  EXPECT_THROW(config_from_json(bad), Error);
  EXPECT_THROW(config_from_json(json{{"dataset", {{"train", "a"}}}}), Error);
}

TEST(Config, RepetitionsWithoutSeeds) {
  auto j = minimal();
  j["repetitions"] = 3;
  EXPECT_EQ(config_from_json(j).seeds, (std::vector<std::uint64_t>{0, 1, 2}));
}

TEST(Config, LoadFromFileResolvesRelativePaths) {
  testing::TempDir dir;
  testing::write_file(dir.path() / "c.json", minimal().dump());
  const auto c = load_config(dir.path() / "c.json");
  EXPECT_EQ(c.train_path, dir.path() / "d/train.jsonl");
  testing::write_file(dir.path() / "broken.json", "{");
  EXPECT_THROW(load_config(dir.path() / "broken.json"), Error);
  EXPECT_THROW(load_config(dir.path() / "missing.json"), Error);
}

}  // namespace
}  // namespace nlgal
