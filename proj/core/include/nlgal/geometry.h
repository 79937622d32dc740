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

#ifndef NLGAL_GEOMETRY_H_
#define NLGAL_GEOMETRY_H_

// Vector-space primitives over example embeddings. Distances are plain
// Euclidean on raw vectors and always accumulate in double precision.

#include <cstddef>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlgal/corpus.h"

namespace nlgal {

using Vector = std::vector<double>;

// Fixed-dimension finite vectors keyed by example id.
class EmbeddingSet {
 public:
  EmbeddingSet() = default;
  explicit EmbeddingSet(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }
  bool empty() const { return vectors_.empty(); }
  bool contains(const ExampleId& id) const { return vectors_.count(id) > 0; }

  // Throws if the length differs from dim() or any component is non-finite.
  void insert(ExampleId id, Vector v);
  const Vector& at(const ExampleId& id) const;

  const std::unordered_map<ExampleId, Vector>& vectors() const { return vectors_; }

  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::unordered_map<ExampleId, Vector> vectors_;
};

double euclidean(std::span<const double> a, std::span<const double> b);

Vector centroid(std::span<const Vector> points);

// Mean distance from `x` to its k nearest neighbours among `pool`, skipping
// `x` itself (matched by id).
double knn_mean_distance(const ExampleId& x, std::span<const ExampleId> pool,
                         const EmbeddingSet& emb, std::size_t k);

// Ids of the k nearest neighbours of `x` in `pool` (excluding `x`), ordered by
// distance and then ascending id.
std::vector<ExampleId> nearest_neighbors(const ExampleId& x,
                                         std::span<const ExampleId> pool,
                                         const EmbeddingSet& emb,
                                         std::size_t k);

double min_distance_to_set(const ExampleId& x, std::span<const ExampleId> anchors,
                           const EmbeddingSet& emb);

// Mean distance from `x` to every anchor other than `x` itself. Throws when no
// such anchor exists.
double mean_distance_to_set(const ExampleId& x, std::span<const ExampleId> anchors,
                            const EmbeddingSet& emb);

}  // namespace nlgal

#endif  // NLGAL_GEOMETRY_H_
