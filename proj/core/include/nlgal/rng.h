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

#ifndef NLGAL_RNG_H_
#define NLGAL_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace nlgal {

// 64-bit FNV-1a over the bytes of `data`.
std::uint64_t fnv1a64(std::string_view data);

// splitmix64 finalizer; a bijective avalanche mix.
std::uint64_t mix64(std::uint64_t x);

// Derives an independent sub-stream seed from a parent seed and a purpose
// label. Adding new labels never changes the seeds of existing ones.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label);
std::uint64_t derive_seed(std::uint64_t seed, std::string_view label,
                          std::uint64_t index);

// Maps a 64-bit hash to [0, 1) using its top 53 bits.
double unit_interval(std::uint64_t bits);

// Seeded generator whose output sequence is fully specified, so results are
// identical across standard libraries. Only the engine comes from <random>;
// every distribution is implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). `bound` must be positive.
  std::size_t below(std::size_t bound);

  // Uniform real in [0, 1).
  double uniform() { return unit_interval(engine_()); }

  // Standard normal via Box-Muller.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Fisher-Yates shuffle driven by `rng`.
template <typename T>
void shuffle(std::vector<T>& values, Rng& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    std::size_t j = rng.below(i);
    std::swap(values[i - 1], values[j]);
  }
}

// Indices of `count` elements drawn uniformly without replacement from
// [0, population), in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                    std::size_t count,
                                                    Rng& rng);

}  // namespace nlgal

#endif  // NLGAL_RNG_H_
