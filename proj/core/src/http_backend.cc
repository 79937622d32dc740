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

#include "nlgal/http_backend.h"

#include <httplib.h>

#include "nlgal/error.h"
#include "nlgal/protocol.h"

namespace nlgal {

struct HttpBackend::Client {
  explicit Client(const std::string& url) : http(url) {}
  httplib::Client http;
};

HttpBackend::HttpBackend(std::string url, double timeout_seconds)
    : url_(std::move(url)), client_(std::make_unique<Client>(url_)) {
  if (!client_->http.is_valid()) throw ConnectionError("invalid backend url '" + url_ + "'");
  const auto secs = static_cast<time_t>(timeout_seconds);
  client_->http.set_read_timeout(secs, 0);
  client_->http.set_write_timeout(secs, 0);
  client_->http.set_connection_timeout(10, 0);
}

HttpBackend::~HttpBackend() = default;

nlohmann::json HttpBackend::request(const std::string& endpoint, const nlohmann::json& body) {
  std::lock_guard lock(mu_);
  auto res = client_->http.Post(endpoint, body.dump(), "application/json");
  if (!res) {
    throw ConnectionError("backend " + url_ + endpoint + " unreachable: " +
                          httplib::to_string(res.error()));
  }
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception& e) {
    throw BackendError("backend " + endpoint + " returned malformed JSON (status " +
                       std::to_string(res->status) + ")");
  }
  if (res->status < 200 || res->status >= 300) {
    std::string message = "status " + std::to_string(res->status);
    if (parsed.is_object() && parsed.contains("error") && parsed["error"].is_string()) {
      message = parsed["error"].get<std::string>();
    }
    throw BackendError("backend " + endpoint + " failed: " + message);
  }
  return parsed;
}

BackendCapabilities HttpBackend::do_capabilities() {
  if (capabilities_) return *capabilities_;
  auto resp = protocol::parse_capabilities_response(request("/capabilities", nlohmann::json::object()));
  BackendCapabilities caps;
  for (const auto& f : resp.flags) caps.insert(parse_capability(f));
  capabilities_ = caps;
  return caps;
}

ModelHandle HttpBackend::do_finetune(std::span<const TrainingPair> labeled,
                                     const FinetuneSpec& spec) {
  protocol::FinetuneRequest req{std::string(kBaseModelId),
                                {labeled.begin(), labeled.end()}, spec};
  auto resp = protocol::parse_finetune_response(request("/finetune", protocol::to_json(req)));
  return {resp.model_id, resp.model_id == kBaseModelId};
}

GenerationMap HttpBackend::do_generate(const ModelHandle& model,
                                       std::span<const TextInput> inputs,
                                       const GenerationMode& mode) {
  protocol::GenerateRequest req{model.model_id, {inputs.begin(), inputs.end()}, mode};
  return protocol::from_wire(
      protocol::parse_generate_response(request("/generate", protocol::to_json(req))));
}

EmbeddingSet HttpBackend::do_embed(std::span<const TextInput> inputs) {
  protocol::EmbedRequest req{{inputs.begin(), inputs.end()}};
  return protocol::from_wire(protocol::parse_embed_response(request("/embed", protocol::to_json(req))));
}

std::vector<double> HttpBackend::do_score(ScoreKind kind, std::span<const ScoreItem> items) {
  protocol::ScoreRequest req{kind, {items.begin(), items.end()}};
  return protocol::parse_score_response(request("/score", protocol::to_json(req))).scores;
}

}  // namespace nlgal
