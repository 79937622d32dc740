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

#ifndef NLGAL_CONFORMANCE_H_
#define NLGAL_CONFORMANCE_H_

// Contract checks any backend must pass: capability honesty, finetune and
// generation determinism, sample cardinality, entropy sanity, embedding and
// scorer ranges. The URL overload adds raw wire-level rejection checks.

#include <string>
#include <vector>

#include "nlgal/backend.h"

namespace nlgal {

struct ConformanceCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ConformanceReport {
  std::vector<ConformanceCheck> checks;
  bool passed() const;
  std::size_t failures() const;
};

ConformanceReport conformance_check(Backend& backend);
ConformanceReport conformance_check(const std::string& url, double timeout_seconds = 60.0);

}  // namespace nlgal

#endif  // NLGAL_CONFORMANCE_H_
