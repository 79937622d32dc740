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

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "nlgal/error.h"
#include "nlgal/rng.h"
#include "test_support.h"

namespace nlgal {
namespace {

using ::nlgal::testing::line_embeddings;

TEST(Euclidean, HandCases) {
  EXPECT_DOUBLE_EQ(euclidean(Vector{0, 0}, Vector{3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(euclidean(Vector{1.5, -2}, Vector{1.5, -2}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean(Vector{0}, Vector{2}), 2.0);
  EXPECT_THROW(euclidean(Vector{0}, Vector{1, 2}), Error);
}

TEST(Centroid, HandCases) {
  EXPECT_EQ(centroid(std::vector<Vector>{{0, 0}, {2, 0}}), (Vector{1, 0}));
  EXPECT_EQ(centroid(std::vector<Vector>{{7, -1}}), (Vector{7, -1}));
  EXPECT_EQ(centroid(std::vector<Vector>{{1, 1}, {3, 3}, {5, 5}}), (Vector{3, 3}));
  EXPECT_THROW(centroid(std::vector<Vector>{}), Error);
}

TEST(Centroid, TranslationEquivariant) {
  Rng rng(1);
  std::vector<Vector> pts(5, Vector(3));
  for (auto& p : pts)
    for (auto& x : p) x = rng.normal();
  const Vector shift = {1.5, -2.0, 0.25};
  auto moved = pts;
  for (auto& p : moved)
    for (int d = 0; d < 3; ++d) p[d] += shift[d];
  const auto a = centroid(pts), b = centroid(moved);
  for (int d = 0; d < 3; ++d) EXPECT_NEAR(b[d], a[d] + shift[d], 1e-12);
}

TEST(EmbeddingSet, ValidatesVectors) {
  EmbeddingSet e(2);
  e.insert("a", {1, 2});
  EXPECT_THROW(e.insert("b", {1}), Error);
  EXPECT_THROW(e.insert("c", {1, std::numeric_limits<double>::quiet_NaN()}), Error);
  EXPECT_THROW(e.insert("d", {1, INFINITY}), Error);
  EXPECT_THROW(e.at("zz"), Error);
  EXPECT_EQ(e.size(), 1u);
}

TEST(KnnMeanDistance, HandCases) {
  const auto e = line_embeddings({{"a", 0}, {"b", 1}, {"c", 3}});
  const std::vector<ExampleId> pool = {"a", "b", "c"};
  EXPECT_DOUBLE_EQ(knn_mean_distance("a", pool, e, 1), 1.0);
  EXPECT_DOUBLE_EQ(knn_mean_distance("c", pool, e, 2), 2.5);
  EXPECT_THROW(knn_mean_distance("a", pool, e, 3), Error);
}

TEST(KnnMeanDistance, CoincidentNeighbour) {
  const auto e = line_embeddings({{"a", 4}, {"a2", 4}, {"b", 9}});
  EXPECT_DOUBLE_EQ(knn_mean_distance("a", std::vector<ExampleId>{"a", "a2", "b"}, e, 1), 0.0);
}

TEST(KnnMeanDistance, PermutationInvariant) {
  const auto e = line_embeddings({{"a", 0}, {"b", 1}, {"c", -1}, {"d", 5}, {"f", 2}});
  const double x = knn_mean_distance("a", std::vector<ExampleId>{"a", "b", "c", "d", "f"}, e, 3);
  const double y = knn_mean_distance("a", std::vector<ExampleId>{"f", "d", "c", "b", "a"}, e, 3);
  EXPECT_DOUBLE_EQ(x, y);
  EXPECT_DOUBLE_EQ(x, (1.0 + 1.0 + 2.0) / 3.0);
}

TEST(NearestNeighbors, TiesBreakById) {
  const auto e = line_embeddings({{"x", 0}, {"b", 1}, {"a", -1}, {"c", 2}});
  EXPECT_EQ(nearest_neighbors("x", std::vector<ExampleId>{"c", "b", "a", "x"}, e, 2),
            (std::vector<ExampleId>{"a", "b"}));
}

TEST(MinDistanceToSet, HandCases) {
  EmbeddingSet e(2);
  e.insert("x", {1, 0});
  e.insert("p", {0, 0});
  e.insert("q", {6, 0});
  EXPECT_DOUBLE_EQ(min_distance_to_set("x", std::vector<ExampleId>{"p", "q"}, e), 1.0);
  EXPECT_DOUBLE_EQ(min_distance_to_set("x", std::vector<ExampleId>{"x", "q"}, e), 0.0);
  EXPECT_DOUBLE_EQ(min_distance_to_set("x", std::vector<ExampleId>{"q"}, e), 5.0);
  EXPECT_THROW(min_distance_to_set("x", std::vector<ExampleId>{}, e), Error);
}

TEST(MinDistanceToSet, UnionIsMinOfParts) {
  Rng rng(2);
  EmbeddingSet e(4);
  std::vector<ExampleId> ids;
  for (int i = 0; i < 12; ++i) {
    Vector v(4);
    for (auto& x : v) x = rng.normal();
    ids.push_back("p" + std::to_string(i));
    e.insert(ids.back(), v);
  }
  const std::vector<ExampleId> a(ids.begin() + 1, ids.begin() + 6), b(ids.begin() + 6, ids.end());
  std::vector<ExampleId> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  EXPECT_DOUBLE_EQ(min_distance_to_set(ids[0], ab, e),
                   std::min(min_distance_to_set(ids[0], a, e), min_distance_to_set(ids[0], b, e)));
}

TEST(MeanDistanceToSet, HandCase) {
  const auto e = line_embeddings({{"x", 0}, {"a", 1}, {"b", 3}});
  EXPECT_DOUBLE_EQ(mean_distance_to_set("x", std::vector<ExampleId>{"a", "b"}, e), 2.0);
}

}  // namespace
}  // namespace nlgal
