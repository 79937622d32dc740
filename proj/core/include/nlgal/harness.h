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

#ifndef NLGAL_HARNESS_H_
#define NLGAL_HARNESS_H_

// The simulated active learning loop: pool initialization, zero-shot
// evaluation, then per iteration select -> label -> fine-tune from base on
// all of L -> evaluate.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlgal/analysis.h"
#include "nlgal/backend.h"
#include "nlgal/config.h"
#include "nlgal/corpus.h"
#include "nlgal/metrics.h"
#include "nlgal/records.h"
#include "nlgal/strategies.h"

namespace nlgal {

// Loaded datasets shared by every seed of a run.
struct TaskData {
  std::shared_ptr<const DatasetSplit> train;
  DatasetSplit test;  // already subsampled to test_size
};

// Reads the config's train/test files and draws the evaluation subset.
TaskData load_task(const RunConfig& config);
// Draws min(size, |test|) examples with a sub-stream of `seed`, keeping file
// order; size 0 keeps the full split.
DatasetSplit subsample_test(const DatasetSplit& test, std::size_t size, std::uint64_t seed);

std::unique_ptr<Backend> make_backend(const BackendConfig& config);

// Throws if the strategy or metric needs a capability the backend lacks.
void check_capabilities(const RunConfig& config, const BackendCapabilities& caps);

std::string apply_prompt(const std::optional<std::string>& prompt_template,
                         const std::string& input);

struct EvalResult {
  double value = 0.0;
  std::unordered_map<ExampleId, double> per_example;
};

// Per-example scores of existing generations. For g_score the formality and
// similarity inputs are fetched from the backend (similarity is the best
// over the references).
std::unordered_map<ExampleId, double> score_generations(
    Backend& backend, MetricKind kind, const MetricConfig& cfg,
    std::span<const Generation> generations, std::span<const Example> examples);

// Generates deterministically for every example and scores per `mode`.
EvalResult evaluate(Backend& backend, const ModelHandle& model, std::span<const Example> examples,
                    MetricKind kind, const MetricConfig& cfg, EvalMode mode,
                    const std::optional<std::string>& prompt_template = std::nullopt);

// Per-purpose seeds derived from one run seed.
struct SeedStreams {
  explicit SeedStreams(std::uint64_t run_seed);
  std::uint64_t pool;
  std::uint64_t backend;
  std::uint64_t strategy(std::size_t iteration) const;
  std::uint64_t sampling(std::size_t iteration) const;

 private:
  std::uint64_t strategy_root_;
  std::uint64_t sampling_root_;
};

struct SeedOutcome {
  std::uint64_t seed = 0;
  std::vector<RunRecord> records;
  bool complete = false;
  std::string error;
};

struct RunOptions {
  // Seeds to skip (e.g. already persisted).
  std::set<std::uint64_t> skip_seeds;
  std::function<void(const RunRecord&)> on_record;
};

SeedOutcome run_seed(const RunConfig& config, const TaskData& data, Backend& backend,
                     std::uint64_t seed, const std::function<void(const RunRecord&)>& on_record = {});

// Runs every configured seed in order. A backend failure aborts that seed
// only; its partial records are returned with complete = false.
std::vector<SeedOutcome> run(const RunConfig& config, const TaskData& data, Backend& backend,
                             const RunOptions& options = {});

struct FirstBatchAnalysis {
  std::uint64_t seed = 0;
  BatchProfile profile;
  double relative_performance = 0.0;
  std::vector<ExampleId> batch;
};

// Every listed strategy selects analysis_batch_size examples from the same
// initial pool using the base model; each batch is profiled for outliers,
// diversity, and relative generation performance.
std::vector<FirstBatchAnalysis> analyze_first_iteration(const RunConfig& config,
                                                        const TaskData& data, Backend& backend,
                                                        std::span<const StrategyKind> strategies,
                                                        std::uint64_t seed);

}  // namespace nlgal

#endif  // NLGAL_HARNESS_H_
