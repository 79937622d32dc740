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

#include "nlgal/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "nlgal/error.h"

namespace nlgal {
namespace {

std::vector<std::pair<double, const ExampleId*>> neighbor_distances(
    const ExampleId& x, std::span<const ExampleId> pool, const EmbeddingSet& emb,
    std::size_t k) {
  if (k == 0) throw Error("knn: k must be >= 1");
  const Vector& origin = emb.at(x);
  std::vector<std::pair<double, const ExampleId*>> dists;
  dists.reserve(pool.size());
  for (const auto& id : pool) {
    if (id == x) continue;
    dists.emplace_back(euclidean(origin, emb.at(id)), &id);
  }
  if (dists.size() < k) {
    throw Error("knn: need " + std::to_string(k) + " neighbours of '" + x +
                "', pool has " + std::to_string(dists.size()));
  }
  std::partial_sort(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(k),
                    dists.end(), [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first < b.first;
                      return *a.second < *b.second;
                    });
  dists.resize(k);
  return dists;
}

}  // namespace

EmbeddingSet::EmbeddingSet(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw Error("EmbeddingSet: dim must be positive");
}

void EmbeddingSet::insert(ExampleId id, Vector v) {
  if (dim_ == 0) throw Error("EmbeddingSet: dimension not set");
  if (v.size() != dim_) {
    throw Error("embedding for '" + id + "' has " + std::to_string(v.size()) +
                " components, expected " + std::to_string(dim_));
  }
  for (double c : v) {
    if (!std::isfinite(c)) throw Error("embedding for '" + id + "' is not finite");
  }
  vectors_.insert_or_assign(std::move(id), std::move(v));
}

const Vector& EmbeddingSet::at(const ExampleId& id) const {
  auto it = vectors_.find(id);
  if (it == vectors_.end()) throw Error("no embedding for id '" + id + "'");
  return it->second;
}

double euclidean(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("euclidean: length mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Vector centroid(std::span<const Vector> points) {
  if (points.empty()) throw Error("centroid: empty point set");
  Vector c(points.front().size(), 0.0);
  for (const auto& p : points) {
    if (p.size() != c.size()) throw Error("centroid: length mismatch");
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += p[i];
  }
  const double n = static_cast<double>(points.size());
  for (double& v : c) v /= n;
  return c;
}

double knn_mean_distance(const ExampleId& x, std::span<const ExampleId> pool,
                         const EmbeddingSet& emb, std::size_t k) {
  auto nearest = neighbor_distances(x, pool, emb, k);
  double sum = 0.0;
  for (const auto& [d, id] : nearest) sum += d;
  return sum / static_cast<double>(k);
}

std::vector<ExampleId> nearest_neighbors(const ExampleId& x,
                                         std::span<const ExampleId> pool,
                                         const EmbeddingSet& emb, std::size_t k) {
  auto nearest = neighbor_distances(x, pool, emb, k);
  std::vector<ExampleId> out;
  out.reserve(k);
  for (const auto& [d, id] : nearest) out.push_back(*id);
  return out;
}

double min_distance_to_set(const ExampleId& x, std::span<const ExampleId> anchors,
                           const EmbeddingSet& emb) {
  if (anchors.empty()) throw Error("min_distance_to_set: empty anchor set");
  const Vector& origin = emb.at(x);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : anchors) best = std::min(best, euclidean(origin, emb.at(a)));
  return best;
}

double mean_distance_to_set(const ExampleId& x, std::span<const ExampleId> anchors,
                            const EmbeddingSet& emb) {
  const Vector& origin = emb.at(x);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& a : anchors) {
    if (a == x) continue;
    sum += euclidean(origin, emb.at(a));
    ++count;
  }
  if (count == 0) throw Error("mean_distance_to_set: no anchors other than '" + x + "'");
  return sum / static_cast<double>(count);
}

}  // namespace nlgal
