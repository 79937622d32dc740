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

#include "nlgal/toy_backend.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "nlgal/error.h"
#include "nlgal/rng.h"

namespace nlgal {
namespace {

std::vector<std::string> sorted_unique(TokenSeq tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

std::size_t overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

std::string join(const TokenSeq& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out.push_back(' ');
    out += t;
  }
  return out;
}

std::string hex_id(std::uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "toy-%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double overlap_f1(const TokenSeq& cand, const TokenSeq& ref) {
  if (cand.empty() || ref.empty()) return cand.empty() && ref.empty() ? 1.0 : 0.0;
  std::unordered_map<std::string, int> counts;
  for (const auto& t : ref) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : cand) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double p = static_cast<double>(common) / static_cast<double>(cand.size());
  const double r = static_cast<double>(common) / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

double formality_of(const TokenSeq& tokens) {
  if (tokens.empty()) return 0.0;
  double chars = 0.0;
  for (const auto& t : tokens) chars += static_cast<double>(t.size());
  return 1.0 - std::exp(-chars / static_cast<double>(tokens.size()) / 4.0);
}

}  // namespace

ToyBackend::ToyBackend(ToyBackendOptions options) : options_(std::move(options)) {
  if (!(options_.p0 >= 0.0 && options_.p0 <= 1.0)) throw Error("toy backend: p0 must lie in [0, 1]");
  if (!(options_.scale > 0.0)) throw Error("toy backend: scale must be positive");
  if (!(options_.difficulty_spread >= 0.0 && options_.difficulty_spread <= 1.0)) {
    throw Error("toy backend: difficulty_spread must lie in [0, 1]");
  }
}

const std::vector<std::string>& ToyBackend::vocabulary() {
  static const std::vector<std::string> kVocab = {
      "able",  "acid",  "aged",  "also",  "area",  "army",  "away",  "baby",
      "back",  "ball",  "band",  "bank",  "base",  "bath",  "bear",  "beat",
      "been",  "beer",  "bell",  "belt",  "best",  "bill",  "bird",  "blow",
      "blue",  "boat",  "body",  "bomb",  "bond",  "bone",  "book",  "boom",
      "born",  "boss",  "both",  "bowl",  "bulk",  "burn",  "bush",  "busy",
      "call",  "calm",  "came",  "camp",  "card",  "care",  "case",  "cash",
      "cast",  "cell",  "chat",  "chip",  "city",  "club",  "coal",  "coat",
      "code",  "cold",  "come",  "cook",  "cool",  "cope",  "copy",  "core",
  };
  return kVocab;
}

double ToyBackend::corruption_rate(std::size_t labeled_size) const {
  return options_.p0 / (1.0 + static_cast<double>(labeled_size) / options_.scale);
}

double ToyBackend::difficulty(std::string_view input) const {
  const double u = unit_interval(mix64(fnv1a64(input)));
  return 1.0 + options_.difficulty_spread * (2.0 * u - 1.0);
}

BackendCapabilities ToyBackend::do_capabilities() {
  return options_.capabilities ? *options_.capabilities : BackendCapabilities::all();
}

ModelHandle ToyBackend::do_finetune(std::span<const TrainingPair> labeled,
                                    const FinetuneSpec& spec) {
  auto model = std::make_shared<Model>();
  model->seed = spec.seed;
  model->entries.reserve(labeled.size());
  for (const auto& pair : labeled) {
    model->entries.push_back({pair.input, sorted_unique(tokenize(pair.input)), tokenize(pair.target)});
  }
  std::sort(model->entries.begin(), model->entries.end(), [](const Entry& a, const Entry& b) {
    if (a.input != b.input) return a.input < b.input;
    return a.target < b.target;
  });

  std::uint64_t h = derive_seed(spec.seed, "toy-model");
  h = mix64(h ^ static_cast<std::uint64_t>(spec.epochs));
  h = mix64(h ^ static_cast<std::uint64_t>(spec.train_batch_size));
  h = mix64(h ^ fnv1a64(std::to_string(spec.learning_rate)));
  for (const auto& e : model->entries) {
    h = mix64(h ^ fnv1a64(e.input));
    h = mix64(h ^ fnv1a64(join(e.target)));
  }
  std::string id = hex_id(h);
  std::lock_guard lock(mu_);
  models_.emplace(id, std::move(model));
  return {id, false};
}

std::shared_ptr<const ToyBackend::Model> ToyBackend::find_model(const ModelHandle& model) const {
  if (model.model_id == kBaseModelId) return nullptr;
  std::lock_guard lock(mu_);
  auto it = models_.find(model.model_id);
  if (it == models_.end()) throw BackendError("unknown model '" + model.model_id + "'");
  return it->second;
}

Generation ToyBackend::generate_one(const Model* model, const TextInput& input,
                                    std::uint64_t sample_stream) const {
  const TokenSeq input_tokens = tokenize(input.text);
  const TokenSeq* source = &input_tokens;
  double p = options_.p0;
  std::uint64_t model_seed = options_.base_seed;
  if (model != nullptr) {
    const auto query = sorted_unique(input_tokens);
    const Entry* best = &model->entries.front();
    std::size_t best_overlap = overlap(query, best->input_tokens);
    for (const auto& e : model->entries) {
      const std::size_t o = overlap(query, e.input_tokens);
      if (o > best_overlap) {
        best = &e;
        best_overlap = o;
      }
    }
    source = &best->target;
    p = corruption_rate(model->entries.size());
    model_seed = model->seed;
  }
  p = std::min(1.0, p * difficulty(input.text));

  const auto& vocab = vocabulary();
  const double max_entropy = std::log(static_cast<double>(vocab.size()));
  const std::uint64_t stream = mix64(derive_seed(model_seed, input.id) ^ sample_stream);

  Generation g;
  g.example_id = input.id;
  TokenSeq out;
  out.reserve(source->size());
  g.token_entropies.reserve(source->size());
  for (std::size_t j = 0; j < source->size(); ++j) {
    const std::uint64_t draw = mix64(stream ^ mix64(2 * j));
    if (unit_interval(draw) < p) {
      out.push_back(vocab[mix64(stream ^ mix64(2 * j + 1)) % vocab.size()]);
      g.token_entropies.push_back(max_entropy * p);
    } else {
      out.push_back((*source)[j]);
      g.token_entropies.push_back(max_entropy * (1.0 - p) * 0.1);
    }
  }
  g.text = join(out);
  return g;
}

GenerationMap ToyBackend::do_generate(const ModelHandle& model,
                                      std::span<const TextInput> inputs,
                                      const GenerationMode& mode) {
  const auto m = find_model(model);
  GenerationMap out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    std::vector<Generation> gens;
    if (!mode.stochastic) {
      gens.push_back(generate_one(m.get(), in, 0));
    } else {
      for (std::size_t k = 1; k <= mode.num_samples; ++k) {
        gens.push_back(generate_one(m.get(), in, derive_seed(mode.seed, "toy-sample", k)));
      }
    }
    out.emplace(in.id, std::move(gens));
  }
  return out;
}

EmbeddingSet ToyBackend::do_embed(std::span<const TextInput> inputs) {
  EmbeddingSet out(kToyEmbeddingDim);
  for (const auto& in : inputs) {
    TokenSeq tokens = tokenize(in.text);
    tokens.insert(tokens.begin(), "<s>");
    tokens.push_back("</s>");
    Vector v(kToyEmbeddingDim, 0.0);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
      const std::string bigram = tokens[i] + '\x1f' + tokens[i + 1];
      v[fnv1a64(bigram) % kToyEmbeddingDim] += 1.0;
    }
    out.insert(in.id, std::move(v));
  }
  return out;
}

std::vector<double> ToyBackend::do_score(ScoreKind kind, std::span<const ScoreItem> items) {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    const TokenSeq cand = tokenize(item.candidate);
    if (kind == ScoreKind::kFormality) {
      out.push_back(formality_of(cand));
    } else {
      out.push_back(overlap_f1(cand, tokenize(*item.reference)));
    }
  }
  return out;
}

}  // namespace nlgal
