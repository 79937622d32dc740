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

#ifndef NLGAL_CONFIG_H_
#define NLGAL_CONFIG_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlgal/backend.h"
#include "nlgal/metrics.h"
#include "nlgal/strategies.h"
#include "nlgal/toy_backend.h"

namespace nlgal {

// Batch sizes n_1..n_N of the labeling schedule.
struct Schedule {
  std::vector<std::size_t> batch_sizes;

  std::size_t iterations() const { return batch_sizes.size(); }
  // Labeled-pool size after each iteration, starting with 0 before the first.
  std::vector<std::size_t> cumulative() const;
  std::size_t total() const;
  void validate() const;

  friend bool operator==(const Schedule&, const Schedule&) = default;
};

// Ten batches of 20 followed by eight batches of 100 (1000 labels in total).
Schedule default_schedule();

enum class EvalMode { kMeanSentence, kCorpus };

struct BackendConfig {
  enum class Type { kToy, kRemote };
  Type type = Type::kToy;
  std::string url;
  double timeout_s = 600.0;
  ToyBackendOptions toy;
};

struct RunConfig {
  std::string dataset;
  std::filesystem::path train_path;
  std::filesystem::path test_path;

  MetricKind metric = MetricKind::kBleu;
  MetricConfig metric_config;

  StrategyKind strategy = StrategyKind::kRandom;
  StrategyParams strategy_params;

  Schedule schedule = default_schedule();
  std::size_t pool_cap = 10000;
  std::size_t repetitions = 5;
  std::vector<std::uint64_t> seeds = {0, 1, 2, 3, 4};

  BackendConfig backend;
  FinetuneSpec finetune;
  EvalMode eval_mode = EvalMode::kMeanSentence;
  // Placeholder "{input}" is replaced by the example input.
  std::optional<std::string> prompt_template;

  // Test examples evaluated per iteration (0 = the full split). The subset is
  // drawn once from `test_seed` and shared by all run seeds.
  std::size_t test_size = 500;
  std::uint64_t test_seed = 0;
  std::size_t analysis_batch_size = 100;
  // When false the records file carries 0 in wall_time_s so that repeated
  // runs are byte-identical; real timings always go to timings.csv.
  bool record_wall_time = false;

  void validate() const;
};

// Nested JSON with keys mirroring the RunConfig fields. Relative dataset
// paths resolve against `base_dir`. Unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j,
                           const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

std::string_view to_string(EvalMode mode);
EvalMode parse_eval_mode(std::string_view name);

}  // namespace nlgal

#endif  // NLGAL_CONFIG_H_
