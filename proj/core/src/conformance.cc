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

#include "nlgal/conformance.h"

#include <cmath>
#include <functional>

#include "nlgal/error.h"
#include "nlgal/http_backend.h"

namespace nlgal {
namespace {

const std::vector<TextInput>& probe_inputs() {
  static const std::vector<TextInput> kInputs = {
      {"c1", "the weather is cold today"},
      {"c2", "please bring the blue book"},
      {"c3", "the weather is cold today"},
  };
  return kInputs;
}

const std::vector<TrainingPair>& probe_training() {
  static const std::vector<TrainingPair> kPairs = {
      {"the weather is cold today", "it is a cold day"},
      {"please bring the blue book", "bring me the blue book please"},
  };
  return kPairs;
}

class Runner {
 public:
  void check(const std::string& name, const std::function<std::string()>& body) {
    ConformanceCheck c{name, false, ""};
    try {
      c.detail = body();
      c.passed = c.detail.empty();
    } catch (const std::exception& e) {
      c.detail = std::string("threw: ") + e.what();
    }
    report.checks.push_back(std::move(c));
  }
  // Passes only when the body throws BackendError.
  void expect_rejection(const std::string& name, const std::function<void()>& body) {
    ConformanceCheck c{name, false, ""};
    try {
      body();
      c.detail = "accepted an invalid request";
    } catch (const BackendError&) {
      c.passed = true;
    } catch (const std::exception& e) {
      c.detail = std::string("wrong error type: ") + e.what();
    }
    report.checks.push_back(std::move(c));
  }
  ConformanceReport report;
};

std::string check_generations(const GenerationMap& map, std::size_t per_id) {
  for (const auto& in : probe_inputs()) {
    auto it = map.find(in.id);
    if (it == map.end()) return "no generations for id '" + in.id + "'";
    if (it->second.size() != per_id) {
      return "id '" + in.id + "' has " + std::to_string(it->second.size()) + " generations, expected " +
             std::to_string(per_id);
    }
    for (const auto& g : it->second) {
      if (g.text.empty() != g.token_entropies.empty()) return "token_entropies length inconsistent with text";
      for (double h : g.token_entropies) {
        if (!std::isfinite(h) || h < 0.0) return "token entropy negative or non-finite";
      }
    }
  }
  if (map.size() != probe_inputs().size()) return "unexpected extra ids";
  return {};
}

void contract_checks(Runner& r, Backend& backend) {
  BackendCapabilities caps;
  r.check("capabilities_static", [&]() -> std::string {
    caps = backend.capabilities();
    if (!(backend.capabilities() == caps)) return "repeated calls differ";
    if (!caps.has(Capability::kFinetune) || !caps.has(Capability::kGenerate)) {
      return "finetune and generate are mandatory";
    }
    return {};
  });
  const ModelHandle base = ModelHandle::base_model();
  r.check("finetune_empty_returns_base", [&]() -> std::string {
    const auto h = backend.finetune(base, {}, FinetuneSpec{});
    return h.model_id == kBaseModelId ? "" : "got '" + h.model_id + "'";
  });
  ModelHandle tuned;
  r.check("finetune_deterministic", [&]() -> std::string {
    FinetuneSpec spec;
    spec.seed = 11;
    tuned = backend.finetune(base, probe_training(), spec);
    const auto again = backend.finetune(base, probe_training(), spec);
    if (tuned.model_id == kBaseModelId) return "non-empty finetune returned the base id";
    return tuned.model_id == again.model_id ? "" : "model ids differ across identical calls";
  });
  for (const ModelHandle* model : std::vector<const ModelHandle*>{&base, &tuned}) {
    const std::string tag = model->model_id == kBaseModelId ? "base" : "tuned";
    r.check("generate_deterministic_" + tag, [&]() -> std::string {
      if (model->model_id.empty()) return "no model";
      const auto a = backend.generate(*model, probe_inputs(), GenerationMode::deterministic());
      if (auto err = check_generations(a, 1); !err.empty()) return err;
      const auto b = backend.generate(*model, probe_inputs(), GenerationMode::deterministic());
      return a == b ? "" : "repeated deterministic generation differs";
    });
  }
  if (caps.has(Capability::kStochasticGenerate)) {
    r.check("generate_stochastic_cardinality", [&]() -> std::string {
      const auto a = backend.generate(base, probe_inputs(), GenerationMode::sampled(3, 5));
      if (auto err = check_generations(a, 3); !err.empty()) return err;
      const auto b = backend.generate(base, probe_inputs(), GenerationMode::sampled(3, 5));
      return a == b ? "" : "same seed produced different samples";
    });
  }
  if (caps.has(Capability::kEmbed)) {
    r.check("embed_consistent", [&]() -> std::string {
      const auto e = backend.embed(probe_inputs());
      if (e.size() != probe_inputs().size()) return "wrong number of vectors";
      if (e.dim() == 0) return "zero dimension";
      if (e.at("c1") != e.at("c3")) return "identical texts embedded differently";
      if (!backend.embed({}).empty()) return "empty input produced vectors";
      return {};
    });
  }
  if (caps.has(Capability::kScoreSimilarity)) {
    r.check("score_similarity_range", [&]() -> std::string {
      const std::vector<ScoreItem> items = {{"a cold day", std::string("a cold day")},
                                            {"a cold day", std::string("blue book")}};
      const auto s = backend.score(ScoreKind::kSimilarity, items);
      if (s.size() != 2) return "wrong number of scores";
      if (s[0] < s[1]) return "identical pair scored below a non-identical pair";
      return {};
    });
  }
  if (caps.has(Capability::kScoreFormality)) {
    r.check("score_formality_deterministic", [&]() -> std::string {
      const std::vector<ScoreItem> items = {{"hey whats up", std::nullopt},
                                            {"Good afternoon, how do you do?", std::nullopt}};
      const auto a = backend.score(ScoreKind::kFormality, items);
      return a == backend.score(ScoreKind::kFormality, items) ? "" : "formality scores not repeatable";
    });
  }
}

}  // namespace

bool ConformanceReport::passed() const { return failures() == 0; }

std::size_t ConformanceReport::failures() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.passed ? 0 : 1;
  return n;
}

ConformanceReport conformance_check(Backend& backend) {
  Runner r;
  contract_checks(r, backend);
  return r.report;
}

ConformanceReport conformance_check(const std::string& url, double timeout_seconds) {
  HttpBackend backend(url, timeout_seconds);
  Runner r;
  contract_checks(r, backend);
  using nlohmann::json;
  const json inputs = json::array({json{{"id", "c1"}, {"text", "hello there"}}});
  r.expect_rejection("reject_single_sample", [&] {
    backend.request("/generate", json{{"model_id", "base"},
                                      {"inputs", inputs},
                                      {"mode", json{{"stochastic", json{{"num_samples", 1}, {"seed", 0}}}}}});
  });
  r.expect_rejection("reject_unknown_model", [&] {
    backend.request("/generate", json{{"model_id", "no-such-model"}, {"inputs", inputs}, {"mode", "deterministic"}});
  });
  r.expect_rejection("reject_incremental_finetune", [&] {
    backend.request("/finetune", json{{"base_model_id", "no-such-model"},
                                      {"examples", json::array()},
                                      {"spec", json{{"epochs", 3}, {"learning_rate", 5e-5},
                                                    {"train_batch_size", 8}, {"seed", 0}}}});
  });
  r.expect_rejection("reject_similarity_without_reference", [&] {
    backend.request("/score", json{{"kind", "similarity"},
                                   {"items", json::array({json{{"candidate", "x"}, {"reference", nullptr}}})}});
  });
  r.expect_rejection("reject_malformed_body", [&] { backend.request("/embed", json{{"texts", 3}}); });
  return r.report;
}

}  // namespace nlgal
