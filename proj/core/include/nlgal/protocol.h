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

#ifndef NLGAL_PROTOCOL_H_
#define NLGAL_PROTOCOL_H_

// JSON bodies of the backend wire protocol. Every endpoint is a POST with a
// UTF-8 JSON body; failures are non-2xx responses carrying {"error": str}.
//
//   /capabilities  {}                       -> {"flags": [str]}
//   /finetune      {"base_model_id", "examples": [{"input", "target"}],
//                   "spec": {"epochs", "learning_rate",
//                            "train_batch_size", "seed"}}
//                                           -> {"model_id"}
//   /generate      {"model_id", "inputs": [{"id", "text"}],
//                   "mode": "deterministic" |
//                           {"stochastic": {"num_samples", "seed"}}}
//                                           -> {"generations":
//                                                {id: [{"text",
//                                                       "token_entropies"}]}}
//   /embed         {"inputs": [{"id", "text"}]}
//                                           -> {"dim", "vectors": {id: [num]}}
//   /score         {"kind": "formality" | "similarity",
//                   "items": [{"candidate", "reference": str | null}]}
//                                           -> {"scores": [num]}

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlgal/backend.h"

namespace nlgal::protocol {

using nlohmann::json;

struct CapabilitiesResponse {
  std::vector<std::string> flags;
  friend bool operator==(const CapabilitiesResponse&, const CapabilitiesResponse&) = default;
};

struct FinetuneRequest {
  std::string base_model_id;
  std::vector<TrainingPair> examples;
  FinetuneSpec spec;
  friend bool operator==(const FinetuneRequest&, const FinetuneRequest&) = default;
};

struct FinetuneResponse {
  std::string model_id;
  friend bool operator==(const FinetuneResponse&, const FinetuneResponse&) = default;
};

struct GenerateRequest {
  std::string model_id;
  std::vector<TextInput> inputs;
  GenerationMode mode;
  friend bool operator==(const GenerateRequest&, const GenerateRequest&) = default;
};

struct GeneratedText {
  std::string text;
  std::vector<double> token_entropies;
  friend bool operator==(const GeneratedText&, const GeneratedText&) = default;
};

struct GenerateResponse {
  std::map<std::string, std::vector<GeneratedText>> generations;
  friend bool operator==(const GenerateResponse&, const GenerateResponse&) = default;
};

struct EmbedRequest {
  std::vector<TextInput> inputs;
  friend bool operator==(const EmbedRequest&, const EmbedRequest&) = default;
};

struct EmbedResponse {
  std::size_t dim = 0;
  std::map<std::string, std::vector<double>> vectors;
  friend bool operator==(const EmbedResponse&, const EmbedResponse&) = default;
};

struct ScoreRequest {
  ScoreKind kind = ScoreKind::kSimilarity;
  std::vector<ScoreItem> items;
  friend bool operator==(const ScoreRequest&, const ScoreRequest&) = default;
};

struct ScoreResponse {
  std::vector<double> scores;
  friend bool operator==(const ScoreResponse&, const ScoreResponse&) = default;
};

json to_json(const CapabilitiesResponse& v);
json to_json(const FinetuneRequest& v);
json to_json(const FinetuneResponse& v);
json to_json(const GenerateRequest& v);
json to_json(const GenerateResponse& v);
json to_json(const EmbedRequest& v);
json to_json(const EmbedResponse& v);
json to_json(const ScoreRequest& v);
json to_json(const ScoreResponse& v);
json error_body(const std::string& message);

// Parsers reject missing or mistyped fields with a BackendError naming the
// offending field.
CapabilitiesResponse parse_capabilities_response(const json& j);
FinetuneRequest parse_finetune_request(const json& j);
FinetuneResponse parse_finetune_response(const json& j);
GenerateRequest parse_generate_request(const json& j);
GenerateResponse parse_generate_response(const json& j);
EmbedRequest parse_embed_request(const json& j);
EmbedResponse parse_embed_response(const json& j);
ScoreRequest parse_score_request(const json& j);
ScoreResponse parse_score_response(const json& j);

// Conversions between wire payloads and in-process types.
GenerateResponse to_wire(const GenerationMap& generations);
GenerationMap from_wire(const GenerateResponse& response);
EmbedResponse to_wire(const EmbeddingSet& embeddings);
EmbeddingSet from_wire(const EmbedResponse& response);

// Serves one request against `backend`: returns the HTTP status and body.
struct Reply {
  int status = 200;
  json body;
};
Reply dispatch(Backend& backend, const std::string& endpoint, const std::string& body);

}  // namespace nlgal::protocol

#endif  // NLGAL_PROTOCOL_H_
