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
#include <unordered_set>

#include "nlgal/error.h"

namespace nlgal {
namespace {

constexpr Capability kAllCapabilities[] = {
    Capability::kFinetune,       Capability::kGenerate,
    Capability::kStochasticGenerate, Capability::kEmbed,
    Capability::kScoreFormality, Capability::kScoreSimilarity,
};

void require(BackendCapabilities caps, Capability cap) {
  if (!caps.has(cap)) {
    throw BackendError("backend lacks capability '" + std::string(to_string(cap)) + "'");
  }
}

}  // namespace

std::string_view to_string(Capability cap) {
  switch (cap) {
    case Capability::kFinetune: return "finetune";
    case Capability::kGenerate: return "generate";
    case Capability::kStochasticGenerate: return "stochastic_generate";
    case Capability::kEmbed: return "embed";
    case Capability::kScoreFormality: return "score_formality";
    case Capability::kScoreSimilarity: return "score_similarity";
  }
  return "unknown";
}

Capability parse_capability(std::string_view name) {
  for (Capability c : kAllCapabilities) {
    if (to_string(c) == name) return c;
  }
  throw BackendError("unknown capability '" + std::string(name) + "'");
}

BackendCapabilities BackendCapabilities::all() {
  BackendCapabilities caps;
  for (Capability c : kAllCapabilities) caps.insert(c);
  return caps;
}

std::vector<std::string> BackendCapabilities::names() const {
  std::vector<std::string> out;
  for (Capability c : kAllCapabilities) {
    if (has(c)) out.emplace_back(to_string(c));
  }
  return out;
}

std::string_view to_string(ScoreKind kind) {
  return kind == ScoreKind::kFormality ? "formality" : "similarity";
}

ScoreKind parse_score_kind(std::string_view name) {
  if (name == "formality") return ScoreKind::kFormality;
  if (name == "similarity") return ScoreKind::kSimilarity;
  throw BackendError("unknown score kind '" + std::string(name) + "'");
}

BackendCapabilities Backend::capabilities() { return do_capabilities(); }

ModelHandle Backend::finetune(const ModelHandle& base, std::span<const TrainingPair> labeled,
                              const FinetuneSpec& spec) {
  if (!base.base || base.model_id != kBaseModelId) {
    throw BackendError("finetune must start from the base model, got '" + base.model_id + "'");
  }
  if (labeled.empty()) return ModelHandle::base_model();
  require(capabilities(), Capability::kFinetune);
  if (spec.epochs < 1 || spec.train_batch_size < 1 || !(spec.learning_rate > 0.0)) {
    throw BackendError("invalid finetune spec");
  }
  ModelHandle out = do_finetune(labeled, spec);
  if (out.model_id.empty() || out.model_id == kBaseModelId) {
    throw BackendError("backend returned an invalid model id");
  }
  out.base = false;
  return out;
}

GenerationMap Backend::generate(const ModelHandle& model, std::span<const TextInput> inputs,
                                const GenerationMode& mode) {
  const auto caps = capabilities();
  require(caps, Capability::kGenerate);
  if (mode.stochastic) {
    require(caps, Capability::kStochasticGenerate);
    if (mode.num_samples < 2) throw BackendError("stochastic generation needs num_samples >= 2");
  }
  std::unordered_set<std::string> ids;
  for (const auto& in : inputs) {
    if (!ids.insert(in.id).second) throw BackendError("duplicate input id '" + in.id + "'");
  }
  if (inputs.empty()) return {};
  GenerationMap out = do_generate(model, inputs, mode);
  const std::size_t expected = mode.stochastic ? mode.num_samples : 1;
  for (const auto& in : inputs) {
    auto it = out.find(in.id);
    if (it == out.end() || it->second.size() != expected) {
      throw BackendError("backend returned the wrong number of generations for '" + in.id + "'");
    }
    for (auto& g : it->second) {
      g.example_id = in.id;
      for (double h : g.token_entropies) {
        if (!std::isfinite(h) || h < 0.0) {
          throw BackendError("invalid token entropy for '" + in.id + "'");
        }
      }
    }
  }
  if (out.size() != inputs.size()) throw BackendError("backend returned generations for unknown ids");
  return out;
}

EmbeddingSet Backend::embed(std::span<const TextInput> inputs) {
  require(capabilities(), Capability::kEmbed);
  EmbeddingSet out = do_embed(inputs);
  for (const auto& in : inputs) {
    if (!out.contains(in.id)) throw BackendError("backend returned no embedding for '" + in.id + "'");
  }
  return out;
}

std::vector<double> Backend::score(ScoreKind kind, std::span<const ScoreItem> items) {
  require(capabilities(), kind == ScoreKind::kFormality ? Capability::kScoreFormality
                                                        : Capability::kScoreSimilarity);
  if (kind == ScoreKind::kSimilarity) {
    for (const auto& item : items) {
      if (!item.reference) throw BackendError("similarity scoring requires a reference");
    }
  }
  if (items.empty()) return {};
  auto out = do_score(kind, items);
  if (out.size() != items.size()) throw BackendError("backend returned the wrong number of scores");
  for (double s : out) {
    if (!(s >= 0.0 && s <= 1.0)) throw BackendError("backend score outside [0, 1]");
  }
  return out;
}

}  // namespace nlgal
