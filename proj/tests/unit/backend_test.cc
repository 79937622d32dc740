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

#include "nlgal/backend.h"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "nlgal/error.h"
#include "nlgal/metrics.h"
#include "nlgal/toy_backend.h"

namespace nlgal {
namespace {

std::vector<TrainingPair> pairs(int n) {
  std::vector<TrainingPair> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"source word" + std::to_string(i) + " common", "target out" + std::to_string(i)});
  }
  return out;
}

std::vector<TextInput> inputs(int n) {
  std::vector<TextInput> out;
  for (int i = 0; i < n; ++i) out.push_back({"q" + std::to_string(i), "source word" + std::to_string(i) + " common"});
  return out;
}

TEST(Capabilities, NamesAndParsing) {
  const auto all = BackendCapabilities::all();
  EXPECT_EQ(all.names(), (std::vector<std::string>{"finetune", "generate", "stochastic_generate", "embed",
                                                   "score_formality", "score_similarity"}));
  for (const auto& n : all.names()) EXPECT_EQ(to_string(parse_capability(n)), n);
  EXPECT_THROW(parse_capability("telepathy"), BackendError);
  EXPECT_EQ(parse_score_kind("formality"), ScoreKind::kFormality);
  EXPECT_THROW(parse_score_kind("fluency"), BackendError);
}

TEST(ToyBackend, OptionValidation) {
  ToyBackendOptions a, b, c;
  a.p0 = 1.5;
  b.scale = 0;
  c.difficulty_spread = 2;
  EXPECT_THROW(ToyBackend{a}, Error);
  EXPECT_THROW(ToyBackend{b}, Error);
  EXPECT_THROW(ToyBackend{c}, Error);
}

TEST(ToyBackend, CorruptionRateDecreasesWithLabeledSize) {
  ToyBackend toy;
  EXPECT_DOUBLE_EQ(toy.corruption_rate(0), 0.5);
  EXPECT_DOUBLE_EQ(toy.corruption_rate(20), 0.25);
  double prev = 1;
  for (std::size_t n : {0, 10, 100, 1000}) {
    EXPECT_LT(toy.corruption_rate(n), prev);
    prev = toy.corruption_rate(n);
  }
  for (const char* s : {"a", "b c", "longer input text"}) {
    EXPECT_GE(toy.difficulty(s), 0.4);
    EXPECT_LE(toy.difficulty(s), 1.6);
    EXPECT_EQ(toy.difficulty(s), toy.difficulty(s));
  }
}

TEST(ToyBackend, EmptyFinetuneReturnsBase) {
  ToyBackend toy;
  const auto h = toy.finetune(ModelHandle::base_model(), {}, {});
  EXPECT_EQ(h, ModelHandle::base_model());
}

TEST(ToyBackend, FinetuneRejectsNonBaseStart) {
  ToyBackend toy;
  const auto data = pairs(3);
  const auto tuned = toy.finetune(ModelHandle::base_model(), data, {});
  EXPECT_FALSE(tuned.base);
  EXPECT_THROW(toy.finetune(tuned, data, {}), BackendError);
  FinetuneSpec bad;
  bad.epochs = 0;
  EXPECT_THROW(toy.finetune(ModelHandle::base_model(), data, bad), BackendError);
}

TEST(ToyBackend, DeterministicFinetuneAndGeneration) {
  ToyBackend a, b;
  const auto data = pairs(10);
  const auto q = inputs(10);
  const auto ha = a.finetune(ModelHandle::base_model(), data, {});
  const auto hb = b.finetune(ModelHandle::base_model(), data, {});
  const auto ga = a.generate(ha, q, GenerationMode::deterministic());
  EXPECT_EQ(ga, b.generate(hb, q, GenerationMode::deterministic()));
  EXPECT_EQ(ga, a.generate(ha, q, GenerationMode::deterministic()));
  for (const auto& in : q) {
    ASSERT_EQ(ga.at(in.id).size(), 1u);
    const auto& g = ga.at(in.id)[0];
    EXPECT_EQ(g.example_id, in.id);
    EXPECT_EQ(g.token_entropies.size(), tokenize(g.text).size());
  }
}

TEST(ToyBackend, StochasticCardinalityAndSeeds) {
  ToyBackend toy;
  const auto q = inputs(5);
  const auto h = toy.finetune(ModelHandle::base_model(), pairs(5), {});
  const auto s1 = toy.generate(h, q, GenerationMode::sampled(4, 1));
  for (const auto& in : q) EXPECT_EQ(s1.at(in.id).size(), 4u);
  EXPECT_EQ(s1, toy.generate(h, q, GenerationMode::sampled(4, 1)));
  EXPECT_NE(s1, toy.generate(h, q, GenerationMode::sampled(4, 2)));
  EXPECT_THROW(toy.generate(h, q, GenerationMode::sampled(1, 1)), BackendError);
}

TEST(ToyBackend, UnknownModelAndDuplicateIds) {
  ToyBackend toy;
  EXPECT_THROW(toy.generate({"nope", false}, inputs(1), {}), BackendError);
  auto q = inputs(2);
  q[1].id = q[0].id;
  EXPECT_THROW(toy.generate(ModelHandle::base_model(), q, {}), BackendError);
  EXPECT_TRUE(toy.generate(ModelHandle::base_model(), {}, {}).empty());
}

TEST(ToyBackend, MoreDataImprovesBleu) {
  // Train on 200 pairs, evaluate on the training inputs.
  std::vector<TrainingPair> data;
  std::vector<TextInput> q;
  std::vector<Example> refs;
  for (int i = 0; i < 200; ++i) {
    const std::string in = "w" + std::to_string(i) + " x" + std::to_string(i % 7) + " y";
    const std::string out = "o" + std::to_string(i) + " p" + std::to_string(i) + " r s t";
    data.push_back({in, out});
    q.push_back({"id" + std::to_string(i), in});
    refs.push_back({"id" + std::to_string(i), in, {out}, {}});
  }
  ToyBackend toy;
  auto bleu_with = [&](std::size_t n) {
    const auto h = toy.finetune(ModelHandle::base_model(),
                                std::span<const TrainingPair>(data.data(), n), {});
    const auto g = toy.generate(h, q, {});
    std::vector<Generation> flat;
    for (const auto& in : q) flat.push_back(g.at(in.id)[0]);
    return corpus_score(MetricKind::kBleu, flat, refs, {});
  };
  const double small = bleu_with(20), large = bleu_with(200);
  EXPECT_GT(large, small);
  EXPECT_GT(bleu_with(20), bleu_with(0));
}

TEST(ToyBackend, EmbeddingsAndScores) {
  ToyBackend toy;
  const auto q = inputs(4);
  const auto e = toy.embed(q);
  EXPECT_EQ(e.dim(), kToyEmbeddingDim);
  EXPECT_EQ(e.size(), 4u);
  EXPECT_EQ(e, toy.embed(q));
  const std::vector<ScoreItem> items = {{"hello there", "hello there"}, {"abc", "xyz"}};
  const auto sim = toy.score(ScoreKind::kSimilarity, items);
  ASSERT_EQ(sim.size(), 2u);
  EXPECT_GT(sim[0], sim[1]);
  for (double s : sim) EXPECT_TRUE(s >= 0 && s <= 1);
  const auto f = toy.score(ScoreKind::kFormality, std::vector<ScoreItem>{{"Good evening.", std::nullopt}});
  EXPECT_TRUE(f[0] >= 0 && f[0] <= 1);
  EXPECT_THROW(toy.score(ScoreKind::kSimilarity, std::vector<ScoreItem>{{"a", std::nullopt}}), BackendError);
}

TEST(ToyBackend, RestrictedCapabilitiesAreEnforced) {
  ToyBackendOptions opts;
  opts.capabilities = BackendCapabilities{Capability::kFinetune, Capability::kGenerate};
  ToyBackend toy(opts);
  EXPECT_FALSE(toy.capabilities().has(Capability::kEmbed));
  EXPECT_THROW(toy.embed(inputs(1)), BackendError);
  EXPECT_THROW(toy.generate(ModelHandle::base_model(), inputs(1), GenerationMode::sampled(3, 0)),
               BackendError);
  EXPECT_THROW(toy.score(ScoreKind::kFormality, std::vector<ScoreItem>{{"a", std::nullopt}}), BackendError);
  EXPECT_NO_THROW(toy.generate(ModelHandle::base_model(), inputs(1), {}));
}

}  // namespace
}  // namespace nlgal
