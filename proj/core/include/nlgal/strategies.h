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

#ifndef NLGAL_STRATEGIES_H_
#define NLGAL_STRATEGIES_H_

// Batch selection strategies. Every strategy is a pure function of its
// SelectionContext; ties always break by ascending example id.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nlgal/corpus.h"
#include "nlgal/generation.h"
#include "nlgal/geometry.h"

namespace nlgal {

enum class StrategyKind { kRandom, kCoreset, kIdds, kMte, kMcDropout, kOracle };

std::string_view to_string(StrategyKind kind);
// Accepts exactly: random, coreset, idds, mte, mc_dropout, oracle.
StrategyKind parse_strategy(std::string_view name);
const std::vector<StrategyKind>& all_strategies();

struct StrategyParams {
  double idds_lambda = 0.5;
  std::size_t mc_samples = 10;
  std::size_t knn_k = 10;
  int variance_bleu_order = 4;

  void validate() const;
};

// Inputs a strategy may need beyond the pools; the harness fills only what
// requirements() asks for.
struct StrategyRequirements {
  bool embeddings = false;
  bool generations = false;
  bool stochastic_samples = false;
  bool eval_scores = false;
};

StrategyRequirements requirements(StrategyKind kind);

// Optional inputs are non-owning and null when absent.
struct SelectionContext {
  const PoolState* pool = nullptr;
  const EmbeddingSet* embeddings = nullptr;
  const std::unordered_map<ExampleId, Generation>* unlabeled_generations = nullptr;
  const GenerationMap* stochastic_samples = nullptr;
  const std::unordered_map<ExampleId, double>* per_example_eval = nullptr;
  std::uint64_t rng_seed = 0;
  StrategyParams params;
};

struct SelectedBatch {
  std::vector<ExampleId> ids;
  std::optional<std::unordered_map<ExampleId, double>> scores;
};

SelectedBatch random_select(const SelectionContext& ctx, std::size_t n);

// Greedy k-center. With an empty labeled pool the first pick is a uniform
// random seed example.
SelectedBatch coreset_greedy(const SelectionContext& ctx, std::size_t n);

// lambda * meanDist(x, L) - (1 - lambda) * meanDist(x, U \ {x}); top-n.
SelectedBatch idds_select(const SelectionContext& ctx, std::size_t n);

// Mean token entropy of the deterministic generation; top-n.
SelectedBatch mte_select(const SelectionContext& ctx, std::size_t n);

// BLEU variance across stochastic samples; top-n.
SelectedBatch mc_dropout_select(const SelectionContext& ctx, std::size_t n);

// Lowest per-example evaluation score first.
SelectedBatch oracle_select(const SelectionContext& ctx, std::size_t n);

SelectedBatch select(StrategyKind kind, const SelectionContext& ctx, std::size_t n);

// Ids ordered by descending score, ties by ascending id; first n kept.
std::vector<ExampleId> top_n_by_score(const std::unordered_map<ExampleId, double>& scores,
                                      std::size_t n);

}  // namespace nlgal

#endif  // NLGAL_STRATEGIES_H_
