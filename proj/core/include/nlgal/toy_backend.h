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

#ifndef NLGAL_TOY_BACKEND_H_
#define NLGAL_TOY_BACKEND_H_

// Deterministic in-process backend. A "fine-tuned" model retrieves the
// labeled example whose input shares the most tokens with the query and
// emits its target, corrupting each token with probability
//   p(L) = p0 / (1 + |L| / scale)
// scaled by a per-input difficulty factor. The base model emits a corrupted
// copy of the input at rate p0. Quality therefore improves with |L| in
// expectation, which is all the harness tests need.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlgal/backend.h"
#include "nlgal/metrics.h"

namespace nlgal {

inline constexpr std::size_t kToyEmbeddingDim = 64;

struct ToyBackendOptions {
  double p0 = 0.5;
  double scale = 20.0;
  // Difficulty multiplier lies in [1 - spread, 1 + spread], hashed from the
  // input text.
  double difficulty_spread = 0.6;
  std::uint64_t base_seed = 0;
  // Advertise a restricted capability set (e.g. no scorers).
  std::optional<BackendCapabilities> capabilities;
};

class ToyBackend : public Backend {
 public:
  explicit ToyBackend(ToyBackendOptions options = {});

  static const std::vector<std::string>& vocabulary();

  const ToyBackendOptions& options() const { return options_; }
  double corruption_rate(std::size_t labeled_size) const;
  double difficulty(std::string_view input) const;

 protected:
  BackendCapabilities do_capabilities() override;
  ModelHandle do_finetune(std::span<const TrainingPair> labeled,
                          const FinetuneSpec& spec) override;
  GenerationMap do_generate(const ModelHandle& model, std::span<const TextInput> inputs,
                            const GenerationMode& mode) override;
  EmbeddingSet do_embed(std::span<const TextInput> inputs) override;
  std::vector<double> do_score(ScoreKind kind, std::span<const ScoreItem> items) override;

 private:
  struct Entry {
    std::string input;
    std::vector<std::string> input_tokens;  // sorted, unique
    TokenSeq target;
  };
  struct Model {
    std::uint64_t seed = 0;
    std::vector<Entry> entries;  // sorted by (input, target)
  };

  std::shared_ptr<const Model> find_model(const ModelHandle& model) const;
  Generation generate_one(const Model* model, const TextInput& input,
                          std::uint64_t sample_stream) const;

  ToyBackendOptions options_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Model>> models_;
};

}  // namespace nlgal

#endif  // NLGAL_TOY_BACKEND_H_
