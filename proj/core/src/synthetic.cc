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

#include "nlgal/synthetic.h"

#include <cstdio>
#include <string>

#include "nlgal/error.h"
#include "nlgal/rng.h"

namespace nlgal {
namespace {

// Pronounceable word from an index: three consonant-vowel syllables.
std::string make_word(std::size_t index) {
  static const char kConsonants[] = "bdfgklmnprstvz";
  static const char kVowels[] = "aeiou";
  constexpr std::size_t kSyllables = 14 * 5;
  std::string w;
  for (int s = 0; s < 3; ++s) {
    const std::size_t syl = index % kSyllables;
    index /= kSyllables;
    w.push_back(kConsonants[syl / 5]);
    w.push_back(kVowels[syl % 5]);
  }
  return w;
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

struct Topic {
  std::vector<std::string> keywords;
  std::vector<std::string> frame;      // 6 words
  std::vector<std::string> alt_frame;  // 6 words
};

std::string frame_reference(const std::vector<std::string>& frame,
                            const std::vector<std::string>& keys) {
  std::vector<std::string> out;
  out.push_back(frame[0]);
  out.push_back(frame[1]);
  out.push_back(keys[0]);
  out.push_back(frame[2]);
  for (std::size_t i = 1; i < keys.size(); ++i) {
    out.push_back(keys[i]);
    out.push_back(frame[std::min<std::size_t>(2 + i, frame.size() - 1)]);
  }
  out.push_back(frame.back());
  return join(out);
}

}  // namespace

PlantedClusters planted_clusters(const PlantedClusterOptions& o, std::uint64_t seed) {
  if (o.points == 0 || o.dim == 0 || o.clusters == 0) throw Error("planted_clusters: empty shape");
  if (!(o.outlier_fraction >= 0.0 && o.outlier_fraction < 1.0)) {
    throw Error("planted_clusters: outlier_fraction must lie in [0, 1)");
  }
  Rng rng(derive_seed(seed, "planted-clusters"));
  std::vector<Vector> centers(o.clusters, Vector(o.dim));
  for (auto& c : centers) {
    for (auto& x : c) x = o.center_spread * rng.normal();
  }
  const auto n_out = static_cast<std::size_t>(std::llround(o.outlier_fraction * static_cast<double>(o.points)));
  PlantedClusters out{{}, EmbeddingSet(o.dim), {}};
  for (std::size_t i = 0; i < o.points; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%04zu", i);
    Vector v(o.dim);
    const bool is_outlier = i >= o.points - n_out;
    if (is_outlier) {
      for (auto& x : v) x = o.outlier_range * (2.0 * rng.uniform() - 1.0);
    } else {
      const Vector& c = centers[i % o.clusters];
      for (std::size_t d = 0; d < o.dim; ++d) v[d] = c[d] + o.cluster_std * rng.normal();
    }
    out.ids.emplace_back(buf);
    out.embeddings.insert(buf, std::move(v));
    out.outlier.push_back(is_outlier);
  }
  return out;
}

SyntheticTask synthetic_text_task(const SyntheticTextOptions& o, std::uint64_t seed) {
  if (o.topics == 0 || o.train_size == 0 || o.test_size == 0) throw Error("synthetic task: empty shape");
  if (o.keywords_per_example == 0 || o.keywords_per_example > o.keywords_per_topic) {
    throw Error("synthetic task: keywords_per_example must lie in [1, keywords_per_topic]");
  }
  if (o.min_filler > o.max_filler || o.filler_vocabulary == 0) throw Error("synthetic task: bad filler range");

  Rng rng(derive_seed(seed, "synthetic-text"));
  // Disjoint word ranges keep topics, frames and filler apart.
  std::size_t next = 1000 + rng.below(100000);
  auto fresh = [&] { return make_word(next++ * 7919 % 343000); };
  std::vector<Topic> topics(o.topics);
  for (auto& t : topics) {
    for (std::size_t k = 0; k < o.keywords_per_topic; ++k) t.keywords.push_back(fresh());
    for (int k = 0; k < 6; ++k) t.frame.push_back(fresh());
    for (int k = 0; k < 6; ++k) t.alt_frame.push_back(fresh());
  }
  std::vector<std::string> filler;
  for (std::size_t k = 0; k < o.filler_vocabulary; ++k) filler.push_back(fresh());

  std::vector<double> cumulative;
  double total = 0.0;
  for (std::size_t t = 0; t < o.topics; ++t) {
    total += 1.0 / static_cast<double>(t + 1);
    cumulative.push_back(total);
  }

  auto make_example = [&](const std::string& id) {
    const double u = rng.uniform() * total;
    std::size_t t = 0;
    while (t + 1 < cumulative.size() && u >= cumulative[t]) ++t;
    const Topic& topic = topics[t];
    std::vector<std::size_t> picks =
        sample_without_replacement(topic.keywords.size(), o.keywords_per_example, rng);
    std::vector<std::string> keys;
    for (std::size_t k : picks) keys.push_back(topic.keywords[k]);
    std::vector<std::string> words = keys;
    const std::size_t n_fill = o.min_filler + rng.below(o.max_filler - o.min_filler + 1);
    for (std::size_t f = 0; f < n_fill; ++f) words.push_back(filler[rng.below(filler.size())]);
    shuffle(words, rng);
    Example ex;
    ex.id = id;
    ex.input = join(words);
    ex.references.push_back(frame_reference(topic.frame, keys));
    if (rng.uniform() < o.second_reference_rate) {
      ex.references.push_back(frame_reference(topic.alt_frame, keys));
    }
    ex.meta["topic"] = "t" + std::to_string(t);
    return ex;
  };

  std::vector<Example> train, test;
  char buf[32];
  for (std::size_t i = 0; i < o.train_size; ++i) {
    std::snprintf(buf, sizeof(buf), "train-%05zu", i);
    train.push_back(make_example(buf));
  }
  for (std::size_t i = 0; i < o.test_size; ++i) {
    std::snprintf(buf, sizeof(buf), "test-%05zu", i);
    test.push_back(make_example(buf));
  }
  return {DatasetSplit("train", std::move(train)), DatasetSplit("test", std::move(test))};
}

}  // namespace nlgal
