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

#include "nlgal/harness.h"

#include <algorithm>
#include <chrono>

#include "nlgal/error.h"
#include "nlgal/http_backend.h"
#include "nlgal/rng.h"
#include "nlgal/toy_backend.h"

namespace nlgal {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<TextInput> prompt_inputs(std::span<const Example> examples,
                                     const std::optional<std::string>& prompt_template) {
  std::vector<TextInput> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back({ex.id, apply_prompt(prompt_template, ex.input)});
  return out;
}

std::vector<Example> examples_for(const DatasetSplit& split, std::span<const ExampleId> ids) {
  std::vector<Example> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(split.at(id));
  return out;
}

std::vector<Generation> first_generations(const GenerationMap& map,
                                          std::span<const Example> examples) {
  std::vector<Generation> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back(map.at(ex.id).front());
  return out;
}

AuxScores fetch_aux(Backend& backend, std::span<const Generation> generations,
                    std::span<const Example> examples) {
  std::unordered_map<ExampleId, const Generation*> by_id;
  for (const auto& g : generations) by_id[g.example_id] = &g;
  std::vector<ScoreItem> formality_items, similarity_items;
  std::vector<std::size_t> first_ref;
  for (const auto& ex : examples) {
    auto it = by_id.find(ex.id);
    if (it == by_id.end()) throw Error("no generation for example '" + ex.id + "'");
    formality_items.push_back({it->second->text, std::nullopt});
    first_ref.push_back(similarity_items.size());
    for (const auto& ref : ex.references) similarity_items.push_back({it->second->text, ref});
  }
  const auto formality = backend.score(ScoreKind::kFormality, formality_items);
  const auto similarity = backend.score(ScoreKind::kSimilarity, similarity_items);
  AuxScores aux;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const std::size_t begin = first_ref[i];
    const std::size_t end = begin + examples[i].references.size();
    const double best = *std::max_element(similarity.begin() + static_cast<std::ptrdiff_t>(begin),
                                          similarity.begin() + static_cast<std::ptrdiff_t>(end));
    aux.emplace(examples[i].id, std::make_pair(formality[i], best));
  }
  return aux;
}

std::unordered_map<ExampleId, Generation> deterministic_map(GenerationMap map) {
  std::unordered_map<ExampleId, Generation> out;
  out.reserve(map.size());
  for (auto& [id, list] : map) out.emplace(id, std::move(list.front()));
  return out;
}

}  // namespace

DatasetSplit subsample_test(const DatasetSplit& test, std::size_t size, std::uint64_t seed) {
  if (size == 0 || size >= test.size()) return test;
  Rng rng(derive_seed(seed, "test-subsample"));
  auto picked = sample_without_replacement(test.size(), size, rng);
  std::sort(picked.begin(), picked.end());
  std::vector<Example> kept;
  kept.reserve(size);
  for (std::size_t i : picked) kept.push_back(test.examples()[i]);
  return DatasetSplit(test.name(), std::move(kept));
}

TaskData load_task(const RunConfig& config) {
  auto train = std::make_shared<const DatasetSplit>(load_dataset(config.train_path, "train"));
  DatasetSplit test = load_dataset(config.test_path, "test");
  if (test.empty()) throw Error("test split is empty: " + config.test_path.string());
  return {std::move(train), subsample_test(test, config.test_size, config.test_seed)};
}

std::unique_ptr<Backend> make_backend(const BackendConfig& config) {
  if (config.type == BackendConfig::Type::kRemote) {
    return std::make_unique<HttpBackend>(config.url, config.timeout_s);
  }
  return std::make_unique<ToyBackend>(config.toy);
}

void check_capabilities(const RunConfig& config, const BackendCapabilities& caps) {
  std::vector<Capability> needed = {Capability::kGenerate, Capability::kFinetune};
  const auto req = requirements(config.strategy);
  if (req.embeddings) needed.push_back(Capability::kEmbed);
  if (req.stochastic_samples) needed.push_back(Capability::kStochasticGenerate);
  if (config.metric == MetricKind::kGScore) {
    needed.push_back(Capability::kScoreFormality);
    needed.push_back(Capability::kScoreSimilarity);
  }
  for (Capability c : needed) {
    if (!caps.has(c)) {
      throw Error("backend lacks capability '" + std::string(to_string(c)) + "' required by strategy '" +
                  std::string(to_string(config.strategy)) + "' / metric '" +
                  std::string(to_string(config.metric)) + "'");
    }
  }
}

std::string apply_prompt(const std::optional<std::string>& prompt_template,
                         const std::string& input) {
  if (!prompt_template) return input;
  static const std::string kPlaceholder = "{input}";
  std::string out;
  const std::string& t = *prompt_template;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = t.find(kPlaceholder, pos);
    out.append(t, pos, hit == std::string::npos ? std::string::npos : hit - pos);
    if (hit == std::string::npos) break;
    out += input;
    pos = hit + kPlaceholder.size();
  }
  return out;
}

std::unordered_map<ExampleId, double> score_generations(
    Backend& backend, MetricKind kind, const MetricConfig& cfg,
    std::span<const Generation> generations, std::span<const Example> examples) {
  if (kind == MetricKind::kGScore) {
    const AuxScores aux = fetch_aux(backend, generations, examples);
    return per_example_scores(kind, generations, examples, cfg, &aux);
  }
  return per_example_scores(kind, generations, examples, cfg);
}

EvalResult evaluate(Backend& backend, const ModelHandle& model, std::span<const Example> examples,
                    MetricKind kind, const MetricConfig& cfg, EvalMode mode,
                    const std::optional<std::string>& prompt_template) {
  if (examples.empty()) throw Error("evaluate: empty test set");
  const auto inputs = prompt_inputs(examples, prompt_template);
  const auto gens = first_generations(
      backend.generate(model, inputs, GenerationMode::deterministic()), examples);

  EvalResult result;
  std::optional<AuxScores> aux;
  if (kind == MetricKind::kGScore) aux = fetch_aux(backend, gens, examples);
  result.per_example = per_example_scores(kind, gens, examples, cfg, aux ? &*aux : nullptr);
  if (mode == EvalMode::kCorpus) {
    result.value = corpus_score(kind, gens, examples, cfg, aux ? &*aux : nullptr);
  } else {
    double sum = 0.0;
    for (const auto& ex : examples) sum += result.per_example.at(ex.id);
    result.value = sum / static_cast<double>(examples.size());
  }
  return result;
}

SeedStreams::SeedStreams(std::uint64_t run_seed)
    : pool(derive_seed(run_seed, "pool")),
      backend(derive_seed(run_seed, "backend")),
      strategy_root_(derive_seed(run_seed, "strategy")),
      sampling_root_(derive_seed(run_seed, "stochastic-generation")) {}

std::uint64_t SeedStreams::strategy(std::size_t iteration) const {
  return derive_seed(strategy_root_, "iteration", iteration);
}

std::uint64_t SeedStreams::sampling(std::size_t iteration) const {
  return derive_seed(sampling_root_, "iteration", iteration);
}

SeedOutcome run_seed(const RunConfig& config, const TaskData& data, Backend& backend,
                     std::uint64_t seed, const std::function<void(const RunRecord&)>& on_record) {
  SeedOutcome outcome;
  outcome.seed = seed;
  const SeedStreams streams(seed);
  const DatasetSplit& train = *data.train;
  const auto& test = data.test.examples();
  const auto req = requirements(config.strategy);
  const std::string strategy_name(to_string(config.strategy));
  const std::string metric_name(to_string(config.metric));

  auto emit = [&](RunRecord r) {
    r.dataset = config.dataset;
    r.strategy = strategy_name;
    r.seed = seed;
    r.metric_name = metric_name;
    if (on_record) on_record(r);
    outcome.records.push_back(std::move(r));
  };

  try {
    auto start = Clock::now();
    PoolState pool = init_pools(data.train, config.pool_cap, streams.pool);
    const std::size_t pool_total = pool.total();
    if (config.schedule.total() > pool.unlabeled().size()) {
      throw Error("schedule needs " + std::to_string(config.schedule.total()) +
                  " labels but the pool holds " + std::to_string(pool.unlabeled().size()));
    }
    const auto cumulative = config.schedule.cumulative();
    FinetuneSpec finetune = config.finetune;
    finetune.seed = streams.backend;
    const ModelHandle base = ModelHandle::base_model();
    ModelHandle model = base;

    {
      const auto eval = evaluate(backend, model, test, config.metric, config.metric_config,
                                 config.eval_mode, config.prompt_template);
      RunRecord r;
      r.iteration = 0;
      r.metric_value = eval.value;
      r.wall_time_s = seconds_since(start);
      emit(std::move(r));
    }

    // U only shrinks, so one embedding pass covers U and every future L.
    std::optional<EmbeddingSet> embeddings;
    if (req.embeddings) {
      const auto pool_examples = examples_for(train, pool.unlabeled());
      embeddings = backend.embed(prompt_inputs(pool_examples, config.prompt_template));
    }

    for (std::size_t i = 1; i <= config.schedule.iterations(); ++i) {
      start = Clock::now();
      SelectionContext ctx;
      ctx.pool = &pool;
      ctx.rng_seed = streams.strategy(i);
      ctx.params = config.strategy_params;
      if (embeddings) ctx.embeddings = &*embeddings;

      const auto unlabeled = examples_for(train, pool.unlabeled());
      std::unordered_map<ExampleId, Generation> generations;
      std::unordered_map<ExampleId, double> eval_scores;
      GenerationMap samples;
      if (req.generations || req.stochastic_samples) {
        const auto inputs = prompt_inputs(unlabeled, config.prompt_template);
        if (req.generations) {
          generations = deterministic_map(backend.generate(model, inputs, GenerationMode::deterministic()));
          ctx.unlabeled_generations = &generations;
        }
        if (req.stochastic_samples) {
          samples = backend.generate(
              model, inputs,
              GenerationMode::sampled(config.strategy_params.mc_samples, streams.sampling(i)));
          ctx.stochastic_samples = &samples;
        }
      }
      if (req.eval_scores) {
        std::vector<Generation> gens;
        gens.reserve(unlabeled.size());
        for (const auto& ex : unlabeled) gens.push_back(generations.at(ex.id));
        eval_scores = score_generations(backend, config.metric, config.metric_config, gens, unlabeled);
        ctx.per_example_eval = &eval_scores;
      }

      SelectedBatch batch = select(config.strategy, ctx, config.schedule.batch_sizes[i - 1]);
      pool = move_to_labeled(pool, batch.ids);
      if (pool.labeled().size() != cumulative[i] || pool.total() != pool_total) {
        throw std::logic_error("pool bookkeeping violated at iteration " + std::to_string(i));
      }

      std::vector<TrainingPair> labeled;
      labeled.reserve(pool.labeled().size());
      for (const auto& id : pool.labeled()) {
        const Example& ex = train.at(id);
        labeled.push_back({apply_prompt(config.prompt_template, ex.input), ex.references.front()});
      }
      model = backend.finetune(base, labeled, finetune);

      const auto eval = evaluate(backend, model, test, config.metric, config.metric_config,
                                 config.eval_mode, config.prompt_template);
      RunRecord r;
      r.iteration = i;
      r.labeled_count = pool.labeled().size();
      r.selected_ids = std::move(batch.ids);
      r.metric_value = eval.value;
      r.strategy_scores = std::move(batch.scores);
      r.wall_time_s = seconds_since(start);
      emit(std::move(r));
    }
    outcome.complete = true;
  } catch (const BackendError& e) {
    outcome.complete = false;
    outcome.error = e.what();
  }
  return outcome;
}

std::vector<SeedOutcome> run(const RunConfig& config, const TaskData& data, Backend& backend,
                             const RunOptions& options) {
  config.validate();
  check_capabilities(config, backend.capabilities());
  std::vector<SeedOutcome> out;
  for (std::uint64_t seed : config.seeds) {
    if (options.skip_seeds.count(seed)) continue;
    out.push_back(run_seed(config, data, backend, seed, options.on_record));
  }
  return out;
}

std::vector<FirstBatchAnalysis> analyze_first_iteration(const RunConfig& config,
                                                        const TaskData& data, Backend& backend,
                                                        std::span<const StrategyKind> strategies,
                                                        std::uint64_t seed) {
  const auto caps = backend.capabilities();
  for (Capability c : {Capability::kEmbed, Capability::kGenerate}) {
    if (!caps.has(c)) throw Error("analysis needs backend capability '" + std::string(to_string(c)) + "'");
  }
  bool need_samples = false;
  for (StrategyKind k : strategies) need_samples |= requirements(k).stochastic_samples;
  if (need_samples && !caps.has(Capability::kStochasticGenerate)) {
    throw Error("analysis needs backend capability 'stochastic_generate'");
  }

  const SeedStreams streams(seed);
  const DatasetSplit& train = *data.train;
  const PoolState pool = init_pools(data.train, config.pool_cap, streams.pool);
  const auto unlabeled = examples_for(train, pool.unlabeled());
  const auto inputs = prompt_inputs(unlabeled, config.prompt_template);
  const ModelHandle base = ModelHandle::base_model();

  const EmbeddingSet embeddings = backend.embed(inputs);
  auto generations = deterministic_map(backend.generate(base, inputs, GenerationMode::deterministic()));
  std::vector<Generation> gens;
  gens.reserve(unlabeled.size());
  for (const auto& ex : unlabeled) gens.push_back(generations.at(ex.id));
  const auto pool_scores = score_generations(backend, config.metric, config.metric_config, gens, unlabeled);
  GenerationMap samples;
  if (need_samples) {
    samples = backend.generate(
        base, inputs, GenerationMode::sampled(config.strategy_params.mc_samples, streams.sampling(1)));
  }

  SelectionContext ctx;
  ctx.pool = &pool;
  ctx.embeddings = &embeddings;
  ctx.unlabeled_generations = &generations;
  ctx.per_example_eval = &pool_scores;
  if (need_samples) ctx.stochastic_samples = &samples;
  ctx.rng_seed = streams.strategy(1);
  ctx.params = config.strategy_params;

  std::vector<FirstBatchAnalysis> out;
  for (StrategyKind kind : strategies) {
    SelectedBatch batch = select(kind, ctx, config.analysis_batch_size);
    std::unordered_map<ExampleId, double> batch_scores;
    for (const auto& id : batch.ids) batch_scores.emplace(id, pool_scores.at(id));
    FirstBatchAnalysis a;
    a.seed = seed;
    a.profile.strategy = std::string(to_string(kind));
    a.profile.batch_size = batch.ids.size();
    a.profile.outlier_score =
        batch_outlier_score(batch.ids, pool.unlabeled(), embeddings, config.strategy_params.knn_k);
    a.profile.diversity = batch_diversity(batch.ids, embeddings);
    a.relative_performance = relative_selection_performance(batch_scores, pool_scores);
    a.batch = std::move(batch.ids);
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace nlgal
