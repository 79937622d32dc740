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

#ifndef NLGAL_BACKEND_H_
#define NLGAL_BACKEND_H_

// Model backend contract. Public entry points validate requests and
// responses; implementations override the protected do_* hooks.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlgal/corpus.h"
#include "nlgal/generation.h"
#include "nlgal/geometry.h"

namespace nlgal {

inline constexpr std::string_view kBaseModelId = "base";

struct ModelHandle {
  std::string model_id;
  bool base = false;

  static ModelHandle base_model() { return {std::string(kBaseModelId), true}; }
  friend bool operator==(const ModelHandle&, const ModelHandle&) = default;
};

struct FinetuneSpec {
  int epochs = 3;
  double learning_rate = 5e-5;
  int train_batch_size = 8;
  std::uint64_t seed = 0;

  friend bool operator==(const FinetuneSpec&, const FinetuneSpec&) = default;
};

enum class Capability {
  kFinetune,
  kGenerate,
  kStochasticGenerate,
  kEmbed,
  kScoreFormality,
  kScoreSimilarity,
};

std::string_view to_string(Capability cap);
Capability parse_capability(std::string_view name);

class BackendCapabilities {
 public:
  BackendCapabilities() = default;
  BackendCapabilities(std::initializer_list<Capability> caps) : flags_(caps) {}

  static BackendCapabilities all();

  bool has(Capability cap) const { return flags_.count(cap) > 0; }
  void insert(Capability cap) { flags_.insert(cap); }
  void erase(Capability cap) { flags_.erase(cap); }
  const std::set<Capability>& flags() const { return flags_; }
  // Flag names in a fixed order.
  std::vector<std::string> names() const;

  friend bool operator==(const BackendCapabilities&, const BackendCapabilities&) = default;

 private:
  std::set<Capability> flags_;
};

struct TrainingPair {
  std::string input;
  std::string target;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

struct TextInput {
  ExampleId id;
  std::string text;

  friend bool operator==(const TextInput&, const TextInput&) = default;
};

struct GenerationMode {
  bool stochastic = false;
  std::size_t num_samples = 1;
  std::uint64_t seed = 0;

  static GenerationMode deterministic() { return {}; }
  static GenerationMode sampled(std::size_t num_samples, std::uint64_t seed) {
    return {true, num_samples, seed};
  }
  friend bool operator==(const GenerationMode&, const GenerationMode&) = default;
};

enum class ScoreKind { kFormality, kSimilarity };

std::string_view to_string(ScoreKind kind);
ScoreKind parse_score_kind(std::string_view name);

struct ScoreItem {
  std::string candidate;
  std::optional<std::string> reference;

  friend bool operator==(const ScoreItem&, const ScoreItem&) = default;
};

class Backend {
 public:
  virtual ~Backend() = default;

  BackendCapabilities capabilities();

  // Always trains from the base model. An empty training set returns the base
  // handle unchanged.
  ModelHandle finetune(const ModelHandle& base, std::span<const TrainingPair> labeled,
                       const FinetuneSpec& spec);

  // Deterministic mode yields one generation per id; stochastic mode yields
  // exactly num_samples (>= 2) per id.
  GenerationMap generate(const ModelHandle& model, std::span<const TextInput> inputs,
                         const GenerationMode& mode);

  EmbeddingSet embed(std::span<const TextInput> inputs);

  // One score in [0, 1] per item, in item order.
  std::vector<double> score(ScoreKind kind, std::span<const ScoreItem> items);

 protected:
  virtual BackendCapabilities do_capabilities() = 0;
  virtual ModelHandle do_finetune(std::span<const TrainingPair> labeled,
                                  const FinetuneSpec& spec) = 0;
  virtual GenerationMap do_generate(const ModelHandle& model,
                                    std::span<const TextInput> inputs,
                                    const GenerationMode& mode) = 0;
  virtual EmbeddingSet do_embed(std::span<const TextInput> inputs) = 0;
  virtual std::vector<double> do_score(ScoreKind kind, std::span<const ScoreItem> items) = 0;
};

}  // namespace nlgal

#endif  // NLGAL_BACKEND_H_
