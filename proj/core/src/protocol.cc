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

#include "nlgal/protocol.h"

#include "nlgal/error.h"

namespace nlgal::protocol {
namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw BackendError("protocol: field '" + field + "' " + what);
}

const json& field(const json& obj, const std::string& name) {
  if (!obj.is_object()) field_error(name, "expected inside an object");
  auto it = obj.find(name);
  if (it == obj.end()) field_error(name, "is missing");
  return *it;
}

std::string string_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (!v.is_string()) field_error(name, "must be a string");
  return v.get<std::string>();
}

double number_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (!v.is_number()) field_error(name, "must be a number");
  return v.get<double>();
}

long long int_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (!v.is_number_integer()) field_error(name, "must be an integer");
  return v.get<long long>();
}

std::uint64_t uint_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<std::uint64_t>(v.get<long long>());
  field_error(name, "must be a non-negative integer");
}

const json& array_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (!v.is_array()) field_error(name, "must be an array");
  return v;
}

const json& object_field(const json& obj, const std::string& name) {
  const json& v = field(obj, name);
  if (!v.is_object()) field_error(name, "must be an object");
  return v;
}

std::vector<double> number_array(const json& arr, const std::string& name) {
  if (!arr.is_array()) field_error(name, "must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number()) field_error(name, "must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

json inputs_json(const std::vector<TextInput>& inputs) {
  json arr = json::array();
  for (const auto& in : inputs) arr.push_back({{"id", in.id}, {"text", in.text}});
  return arr;
}

std::vector<TextInput> parse_inputs(const json& obj) {
  std::vector<TextInput> out;
  for (const auto& in : array_field(obj, "inputs")) {
    out.push_back({string_field(in, "id"), string_field(in, "text")});
  }
  return out;
}

}  // namespace

json to_json(const CapabilitiesResponse& v) { return {{"flags", v.flags}}; }

json to_json(const FinetuneRequest& v) {
  json examples = json::array();
  for (const auto& e : v.examples) examples.push_back({{"input", e.input}, {"target", e.target}});
  return {{"base_model_id", v.base_model_id},
          {"examples", examples},
          {"spec",
           {{"epochs", v.spec.epochs},
            {"learning_rate", v.spec.learning_rate},
            {"train_batch_size", v.spec.train_batch_size},
            {"seed", v.spec.seed}}}};
}

json to_json(const FinetuneResponse& v) { return {{"model_id", v.model_id}}; }

json to_json(const GenerateRequest& v) {
  json mode = "deterministic";
  if (v.mode.stochastic) {
    mode = {{"stochastic", {{"num_samples", v.mode.num_samples}, {"seed", v.mode.seed}}}};
  }
  return {{"model_id", v.model_id}, {"inputs", inputs_json(v.inputs)}, {"mode", mode}};
}

json to_json(const GenerateResponse& v) {
  json gens = json::object();
  for (const auto& [id, list] : v.generations) {
    json arr = json::array();
    for (const auto& g : list) arr.push_back({{"text", g.text}, {"token_entropies", g.token_entropies}});
    gens[id] = arr;
  }
  return {{"generations", gens}};
}

json to_json(const EmbedRequest& v) { return {{"inputs", inputs_json(v.inputs)}}; }

json to_json(const EmbedResponse& v) {
  json vectors = json::object();
  for (const auto& [id, vec] : v.vectors) vectors[id] = vec;
  return {{"dim", v.dim}, {"vectors", vectors}};
}

json to_json(const ScoreRequest& v) {
  json items = json::array();
  for (const auto& item : v.items) {
    json reference = item.reference ? json(*item.reference) : json(nullptr);
    items.push_back({{"candidate", item.candidate}, {"reference", reference}});
  }
  return {{"kind", std::string(to_string(v.kind))}, {"items", items}};
}

json to_json(const ScoreResponse& v) { return {{"scores", v.scores}}; }

json error_body(const std::string& message) { return {{"error", message}}; }

CapabilitiesResponse parse_capabilities_response(const json& j) {
  CapabilitiesResponse out;
  for (const auto& f : array_field(j, "flags")) {
    if (!f.is_string()) field_error("flags", "must contain only strings");
    out.flags.push_back(f.get<std::string>());
  }
  return out;
}

FinetuneRequest parse_finetune_request(const json& j) {
  FinetuneRequest out;
  out.base_model_id = string_field(j, "base_model_id");
  for (const auto& e : array_field(j, "examples")) {
    out.examples.push_back({string_field(e, "input"), string_field(e, "target")});
  }
  const json& spec = object_field(j, "spec");
  out.spec.epochs = static_cast<int>(int_field(spec, "epochs"));
  out.spec.learning_rate = number_field(spec, "learning_rate");
  out.spec.train_batch_size = static_cast<int>(int_field(spec, "train_batch_size"));
  out.spec.seed = uint_field(spec, "seed");
  return out;
}

FinetuneResponse parse_finetune_response(const json& j) {
  return {string_field(j, "model_id")};
}

GenerateRequest parse_generate_request(const json& j) {
  GenerateRequest out;
  out.model_id = string_field(j, "model_id");
  out.inputs = parse_inputs(j);
  const json& mode = field(j, "mode");
  if (mode.is_string()) {
    if (mode.get<std::string>() != "deterministic") field_error("mode", "must be \"deterministic\"");
    out.mode = GenerationMode::deterministic();
  } else if (mode.is_object()) {
    const json& s = object_field(mode, "stochastic");
    out.mode = GenerationMode::sampled(static_cast<std::size_t>(uint_field(s, "num_samples")),
                                       uint_field(s, "seed"));
  } else {
    field_error("mode", "must be a string or an object");
  }
  return out;
}

GenerateResponse parse_generate_response(const json& j) {
  GenerateResponse out;
  for (const auto& [id, list] : object_field(j, "generations").items()) {
    if (!list.is_array()) field_error("generations", "values must be arrays");
    std::vector<GeneratedText> gens;
    for (const auto& g : list) {
      gens.push_back({string_field(g, "text"), number_array(field(g, "token_entropies"), "token_entropies")});
    }
    out.generations.emplace(id, std::move(gens));
  }
  return out;
}

EmbedRequest parse_embed_request(const json& j) { return {parse_inputs(j)}; }

EmbedResponse parse_embed_response(const json& j) {
  EmbedResponse out;
  out.dim = static_cast<std::size_t>(uint_field(j, "dim"));
  for (const auto& [id, vec] : object_field(j, "vectors").items()) {
    out.vectors.emplace(id, number_array(vec, "vectors"));
  }
  return out;
}

ScoreRequest parse_score_request(const json& j) {
  ScoreRequest out;
  out.kind = parse_score_kind(string_field(j, "kind"));
  for (const auto& item : array_field(j, "items")) {
    ScoreItem s;
    s.candidate = string_field(item, "candidate");
    if (auto it = item.find("reference"); it != item.end() && !it->is_null()) {
      if (!it->is_string()) field_error("reference", "must be a string or null");
      s.reference = it->get<std::string>();
    }
    out.items.push_back(std::move(s));
  }
  return out;
}

ScoreResponse parse_score_response(const json& j) {
  return {number_array(field(j, "scores"), "scores")};
}

GenerateResponse to_wire(const GenerationMap& generations) {
  GenerateResponse out;
  for (const auto& [id, list] : generations) {
    auto& dst = out.generations[id];
    for (const auto& g : list) dst.push_back({g.text, g.token_entropies});
  }
  return out;
}

GenerationMap from_wire(const GenerateResponse& response) {
  GenerationMap out;
  for (const auto& [id, list] : response.generations) {
    auto& dst = out[id];
    for (const auto& g : list) dst.push_back({id, g.text, g.token_entropies});
  }
  return out;
}

EmbedResponse to_wire(const EmbeddingSet& embeddings) {
  EmbedResponse out;
  out.dim = embeddings.dim();
  for (const auto& [id, v] : embeddings.vectors()) out.vectors.emplace(id, v);
  return out;
}

EmbeddingSet from_wire(const EmbedResponse& response) {
  if (response.dim == 0) throw BackendError("protocol: field 'dim' must be positive");
  EmbeddingSet out(response.dim);
  for (const auto& [id, v] : response.vectors) {
    try {
      out.insert(id, v);
    } catch (const Error& e) {
      throw BackendError(std::string("protocol: field 'vectors' ") + e.what());
    }
  }
  return out;
}

Reply dispatch(Backend& backend, const std::string& endpoint, const std::string& body) {
  try {
    json request = body.empty() ? json::object() : json::parse(body);
    if (endpoint == "/capabilities") {
      return {200, to_json(CapabilitiesResponse{backend.capabilities().names()})};
    }
    if (endpoint == "/finetune") {
      auto req = parse_finetune_request(request);
      ModelHandle base{req.base_model_id, req.base_model_id == kBaseModelId};
      auto handle = backend.finetune(base, req.examples, req.spec);
      return {200, to_json(FinetuneResponse{handle.model_id})};
    }
    if (endpoint == "/generate") {
      auto req = parse_generate_request(request);
      ModelHandle model{req.model_id, req.model_id == kBaseModelId};
      return {200, to_json(to_wire(backend.generate(model, req.inputs, req.mode)))};
    }
    if (endpoint == "/embed") {
      auto req = parse_embed_request(request);
      return {200, to_json(to_wire(backend.embed(req.inputs)))};
    }
    if (endpoint == "/score") {
      auto req = parse_score_request(request);
      return {200, to_json(ScoreResponse{backend.score(req.kind, req.items)})};
    }
    return {404, error_body("unknown endpoint " + endpoint)};
  } catch (const json::exception& e) {
    return {400, error_body(std::string("malformed request: ") + e.what())};
  } catch (const Error& e) {
    return {400, error_body(e.what())};
  }
}

}  // namespace nlgal::protocol
