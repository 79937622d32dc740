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

#ifndef NLGAL_HTTP_BACKEND_H_
#define NLGAL_HTTP_BACKEND_H_

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "nlgal/backend.h"

namespace nlgal {

// Client for a backend served over the JSON wire protocol (see protocol.h).
class HttpBackend : public Backend {
 public:
  // `url` is scheme://host:port, e.g. "http://127.0.0.1:8080".
  explicit HttpBackend(std::string url, double timeout_seconds = 600.0);
  ~HttpBackend() override;

  const std::string& url() const { return url_; }

  // Raw POST; returns the parsed 2xx body. Throws ConnectionError when
  // unreachable and BackendError carrying the server's error text otherwise.
  nlohmann::json request(const std::string& endpoint, const nlohmann::json& body);

 protected:
  BackendCapabilities do_capabilities() override;
  ModelHandle do_finetune(std::span<const TrainingPair> labeled,
                          const FinetuneSpec& spec) override;
  GenerationMap do_generate(const ModelHandle& model, std::span<const TextInput> inputs,
                            const GenerationMode& mode) override;
  EmbeddingSet do_embed(std::span<const TextInput> inputs) override;
  std::vector<double> do_score(ScoreKind kind, std::span<const ScoreItem> items) override;

 private:
  struct Client;
  std::string url_;
  std::unique_ptr<Client> client_;
  std::mutex mu_;
  std::optional<BackendCapabilities> capabilities_;
};

}  // namespace nlgal

#endif  // NLGAL_HTTP_BACKEND_H_
