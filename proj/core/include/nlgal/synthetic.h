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

#ifndef NLGAL_SYNTHETIC_H_
#define NLGAL_SYNTHETIC_H_

// Seeded synthetic data: planted-cluster embeddings for batch diagnostics and
// a topic-structured text-to-text task for end-to-end runs on the toy backend.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nlgal/corpus.h"
#include "nlgal/geometry.h"

namespace nlgal {

struct PlantedClusterOptions {
  std::size_t points = 1000;
  std::size_t dim = 16;
  std::size_t clusters = 3;
  double outlier_fraction = 0.05;
  double cluster_std = 1.0;
  // Cluster centres ~ N(0, center_spread^2) per coordinate.
  double center_spread = 6.0;
  // Outliers uniform in [-outlier_range, outlier_range]^dim.
  double outlier_range = 20.0;
};

struct PlantedClusters {
  std::vector<ExampleId> ids;  // "p0000".., cluster members first
  EmbeddingSet embeddings;
  std::vector<bool> outlier;   // aligned with ids
};

PlantedClusters planted_clusters(const PlantedClusterOptions& options, std::uint64_t seed);

struct SyntheticTextOptions {
  std::size_t train_size = 3000;
  std::size_t test_size = 500;
  std::size_t topics = 12;
  std::size_t keywords_per_topic = 8;
  std::size_t keywords_per_example = 3;
  std::size_t min_filler = 1;
  std::size_t max_filler = 6;
  std::size_t filler_vocabulary = 40;
  // Probability that an example carries a second reference.
  double second_reference_rate = 0.3;
};

struct SyntheticTask {
  DatasetSplit train;
  DatasetSplit test;
};

// Inputs mix topic keywords with filler words; references wrap the same
// keywords in a topic-specific frame. Topic frequencies fall off as 1/rank.
SyntheticTask synthetic_text_task(const SyntheticTextOptions& options, std::uint64_t seed);

}  // namespace nlgal

#endif  // NLGAL_SYNTHETIC_H_
