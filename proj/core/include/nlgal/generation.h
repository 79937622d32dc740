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

#ifndef NLGAL_GENERATION_H_
#define NLGAL_GENERATION_H_

#include <string>
#include <unordered_map>
#include <vector>

#include "nlgal/corpus.h"

namespace nlgal {

// A model output for one input. Entropies are in nats, one per generated
// token as counted by the backend.
struct Generation {
  ExampleId example_id;
  std::string text;
  std::vector<double> token_entropies;

  friend bool operator==(const Generation&, const Generation&) = default;
};

using GenerationMap = std::unordered_map<ExampleId, std::vector<Generation>>;

}  // namespace nlgal

#endif  // NLGAL_GENERATION_H_
