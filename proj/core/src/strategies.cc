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

#include "nlgal/strategies.h"

#include <algorithm>
#include <limits>

#include "nlgal/error.h"
#include "nlgal/metrics.h"
#include "nlgal/rng.h"

namespace nlgal {
namespace {

const PoolState& require_pool(const SelectionContext& ctx, std::string_view who) {
  if (ctx.pool == nullptr) throw Error(std::string(who) + ": no pool in context");
  if (ctx.pool->unlabeled().empty()) {
    throw Error(std::string(who) + ": unlabeled pool is empty");
  }
  return *ctx.pool;
}

void require_n(std::size_t n, std::string_view who) {
  if (n == 0) throw Error(std::string(who) + ": batch size must be >= 1");
}

const EmbeddingSet& require_embeddings(const SelectionContext& ctx, std::string_view who) {
  if (ctx.embeddings == nullptr) throw Error(std::string(who) + ": embeddings required");
  return *ctx.embeddings;
}

SelectedBatch top_n(std::unordered_map<ExampleId, double> scores, std::size_t n) {
  SelectedBatch batch;
  batch.ids = top_n_by_score(scores, n);
  batch.scores = std::move(scores);
  return batch;
}

}  // namespace

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kRandom: return "random";
    case StrategyKind::kCoreset: return "coreset";
    case StrategyKind::kIdds: return "idds";
    case StrategyKind::kMte: return "mte";
    case StrategyKind::kMcDropout: return "mc_dropout";
    case StrategyKind::kOracle: return "oracle";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
  for (StrategyKind k : all_strategies()) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown strategy '" + std::string(name) + "'");
}

const std::vector<StrategyKind>& all_strategies() {
  static const std::vector<StrategyKind> kAll = {
      StrategyKind::kRandom, StrategyKind::kCoreset,   StrategyKind::kIdds,
      StrategyKind::kMte,    StrategyKind::kMcDropout, StrategyKind::kOracle};
  return kAll;
}

void StrategyParams::validate() const {
  if (!(idds_lambda >= 0.0 && idds_lambda <= 1.0)) throw Error("idds_lambda must lie in [0, 1]");
  if (mc_samples < 2) throw Error("mc_samples must be >= 2");
  if (knn_k < 1) throw Error("knn_k must be >= 1");
  if (variance_bleu_order < 1) throw Error("variance_bleu_order must be >= 1");
}

StrategyRequirements requirements(StrategyKind kind) {
  StrategyRequirements r;
  switch (kind) {
    case StrategyKind::kRandom: break;
    case StrategyKind::kCoreset:
    case StrategyKind::kIdds: r.embeddings = true; break;
    case StrategyKind::kMte: r.generations = true; break;
    case StrategyKind::kMcDropout: r.stochastic_samples = true; break;
    case StrategyKind::kOracle:
      r.generations = true;
      r.eval_scores = true;
      break;
  }
  return r;
}

std::vector<ExampleId> top_n_by_score(const std::unordered_map<ExampleId, double>& scores,
                                      std::size_t n) {
  std::vector<std::pair<double, const ExampleId*>> ranked;
  ranked.reserve(scores.size());
  for (const auto& [id, s] : scores) ranked.emplace_back(s, &id);
  const std::size_t take = std::min(n, ranked.size());
  auto better = [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  };
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(take),
                    ranked.end(), better);
  std::vector<ExampleId> ids;
  ids.reserve(take);
  for (std::size_t i = 0; i < take; ++i) ids.push_back(*ranked[i].second);
  return ids;
}

SelectedBatch random_select(const SelectionContext& ctx, std::size_t n) {
  require_n(n, "random");
  const auto& unlabeled = require_pool(ctx, "random").unlabeled();
  Rng rng(derive_seed(ctx.rng_seed, "random-select"));
  SelectedBatch batch;
  for (std::size_t i : sample_without_replacement(unlabeled.size(), n, rng)) {
    batch.ids.push_back(unlabeled[i]);
  }
  return batch;
}

SelectedBatch coreset_greedy(const SelectionContext& ctx, std::size_t n) {
  require_n(n, "coreset");
  const PoolState& pool = require_pool(ctx, "coreset");
  const EmbeddingSet& emb = require_embeddings(ctx, "coreset");

  // Candidates sorted by id so the first maximum found is the tie winner.
  std::vector<ExampleId> candidates = pool.unlabeled();
  std::sort(candidates.begin(), candidates.end());
  const std::size_t take = std::min(n, candidates.size());
  std::vector<const Vector*> vecs;
  vecs.reserve(candidates.size());
  for (const auto& id : candidates) vecs.push_back(&emb.at(id));

  std::vector<double> min_dist(candidates.size(), std::numeric_limits<double>::infinity());
  std::vector<bool> taken(candidates.size(), false);
  SelectedBatch batch;
  std::unordered_map<ExampleId, double> scores;

  auto absorb = [&](const Vector& center) {
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!taken[i]) min_dist[i] = std::min(min_dist[i], euclidean(*vecs[i], center));
    }
  };
  auto pick = [&](std::size_t i, double score) {
    taken[i] = true;
    batch.ids.push_back(candidates[i]);
    scores.emplace(candidates[i], score);
    absorb(*vecs[i]);
  };

  if (pool.labeled().empty()) {
    // Jump-start: one uniformly random seed example stands in for L.
    Rng rng(derive_seed(ctx.rng_seed, "coreset-seed"));
    const ExampleId& seed_id = pool.unlabeled()[rng.below(pool.unlabeled().size())];
    auto it = std::lower_bound(candidates.begin(), candidates.end(), seed_id);
    pick(static_cast<std::size_t>(it - candidates.begin()), 0.0);
  } else {
    for (const auto& id : pool.labeled()) absorb(emb.at(id));
  }

  while (batch.ids.size() < take) {
    std::size_t best = candidates.size();
    double best_dist = -1.0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (!taken[i] && min_dist[i] > best_dist) {
        best = i;
        best_dist = min_dist[i];
      }
    }
    pick(best, best_dist);
  }
  batch.scores = std::move(scores);
  return batch;
}

SelectedBatch idds_select(const SelectionContext& ctx, std::size_t n) {
  require_n(n, "idds");
  const PoolState& pool = require_pool(ctx, "idds");
  const EmbeddingSet& emb = require_embeddings(ctx, "idds");
  const auto& unlabeled = pool.unlabeled();
  const auto& labeled = pool.labeled();
  if (labeled.empty() && unlabeled.size() < 2) {
    throw Error("idds: need at least 2 unlabeled examples when the labeled pool is empty");
  }
  const double lambda = ctx.params.idds_lambda;

  std::vector<const Vector*> uvecs;
  uvecs.reserve(unlabeled.size());
  for (const auto& id : unlabeled) uvecs.push_back(&emb.at(id));

  // Pairwise unlabeled distances are symmetric; accumulate each pair once.
  std::vector<double> unlabeled_sum(unlabeled.size(), 0.0);
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    for (std::size_t j = i + 1; j < unlabeled.size(); ++j) {
      const double d = euclidean(*uvecs[i], *uvecs[j]);
      unlabeled_sum[i] += d;
      unlabeled_sum[j] += d;
    }
  }

  std::unordered_map<ExampleId, double> scores;
  scores.reserve(unlabeled.size());
  for (std::size_t i = 0; i < unlabeled.size(); ++i) {
    double score = 0.0;
    if (unlabeled.size() > 1) {
      score -= (1.0 - lambda) * unlabeled_sum[i] / static_cast<double>(unlabeled.size() - 1);
    }
    if (!labeled.empty()) {
      double sum = 0.0;
      for (const auto& id : labeled) sum += euclidean(*uvecs[i], emb.at(id));
      score += lambda * sum / static_cast<double>(labeled.size());
    }
    scores.emplace(unlabeled[i], score);
  }
  return top_n(std::move(scores), n);
}

SelectedBatch mte_select(const SelectionContext& ctx, std::size_t n) {
  require_n(n, "mte");
  const PoolState& pool = require_pool(ctx, "mte");
  if (ctx.unlabeled_generations == nullptr) throw Error("mte: generations required");
  std::unordered_map<ExampleId, double> scores;
  scores.reserve(pool.unlabeled().size());
  for (const auto& id : pool.unlabeled()) {
    auto it = ctx.unlabeled_generations->find(id);
    if (it == ctx.unlabeled_generations->end()) {
      throw Error("mte: missing generation for '" + id + "'");
    }
    const auto& h = it->second.token_entropies;
    double mean = 0.0;
    if (!h.empty()) {
      for (double v : h) mean += v;
      mean /= static_cast<double>(h.size());
    }
    scores.emplace(id, mean);
  }
  return top_n(std::move(scores), n);
}

SelectedBatch mc_dropout_select(const SelectionContext& ctx, std::size_t n) {
  require_n(n, "mc_dropout");
  const PoolState& pool = require_pool(ctx, "mc_dropout");
  if (ctx.stochastic_samples == nullptr) throw Error("mc_dropout: stochastic samples required");
  std::unordered_map<ExampleId, double> scores;
  scores.reserve(pool.unlabeled().size());
  for (const auto& id : pool.unlabeled()) {
    auto it = ctx.stochastic_samples->find(id);
    if (it == ctx.stochastic_samples->end() || it->second.size() < 2) {
      throw Error("mc_dropout: fewer than 2 samples for '" + id + "'");
    }
    std::vector<TokenSeq> samples;
    samples.reserve(it->second.size());
    for (const auto& g : it->second) samples.push_back(tokenize(g.text));
    scores.emplace(id, bleu_variance(samples, ctx.params.variance_bleu_order));
  }
  return top_n(std::move(scores), n);
}

SelectedBatch oracle_select(const SelectionContext& ctx, std::size_t n) {
  require_n(n, "oracle");
  const PoolState& pool = require_pool(ctx, "oracle");
  if (ctx.per_example_eval == nullptr) throw Error("oracle: evaluation scores required");
  // Rank by negated score so the shared descending rule puts the worst first.
  std::unordered_map<ExampleId, double> negated;
  negated.reserve(pool.unlabeled().size());
  for (const auto& id : pool.unlabeled()) {
    auto it = ctx.per_example_eval->find(id);
    if (it == ctx.per_example_eval->end()) throw Error("oracle: missing score for '" + id + "'");
    negated.emplace(id, -it->second);
  }
  SelectedBatch batch;
  batch.ids = top_n_by_score(negated, n);
  std::unordered_map<ExampleId, double> scores;
  for (const auto& [id, s] : negated) scores.emplace(id, -s);
  batch.scores = std::move(scores);
  return batch;
}

SelectedBatch select(StrategyKind kind, const SelectionContext& ctx, std::size_t n) {
  ctx.params.validate();
  switch (kind) {
    case StrategyKind::kRandom: return random_select(ctx, n);
    case StrategyKind::kCoreset: return coreset_greedy(ctx, n);
    case StrategyKind::kIdds: return idds_select(ctx, n);
    case StrategyKind::kMte: return mte_select(ctx, n);
    case StrategyKind::kMcDropout: return mc_dropout_select(ctx, n);
    case StrategyKind::kOracle: return oracle_select(ctx, n);
  }
  throw Error("unknown strategy");
}

}  // namespace nlgal
