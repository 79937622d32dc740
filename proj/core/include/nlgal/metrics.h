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

#ifndef NLGAL_METRICS_H_
#define NLGAL_METRICS_H_

// Text-overlap evaluation metrics (BLEU, iBLEU, ROUGE-L, G-Score) and the
// Monte Carlo BLEU variance used as an uncertainty score.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlgal/corpus.h"
#include "nlgal/generation.h"

namespace nlgal {

using TokenSeq = std::vector<std::string>;

enum class MetricKind { kBleu, kIbleu, kRougeL, kGScore };

std::string_view to_string(MetricKind kind);
// Accepts "bleu", "ibleu", "rouge_l", "g_score".
MetricKind parse_metric_kind(std::string_view name);

struct MetricConfig {
  double ibleu_alpha = 0.8;
  int bleu_max_order = 4;
  int variance_bleu_order = 4;

  // Throws on out-of-range values.
  void validate() const;
};

// Lowercases ASCII, isolates every ASCII punctuation character as its own
// token, splits on whitespace.
TokenSeq tokenize(std::string_view text);

// Sentence BLEU with clipped n-gram precisions and a closest-reference
// brevity penalty. A zero precision at order n is replaced by
// 1 / (2 * max(1, candidate n-gram count)); with no unigram match the score
// is 0. Empty candidates score 0.
double bleu_sentence(const TokenSeq& candidate, std::span<const TokenSeq> references,
                     int max_order = 4);

struct CorpusPair {
  TokenSeq candidate;
  std::vector<TokenSeq> references;
};

// Unsmoothed corpus BLEU: counts and lengths are pooled before computing
// precisions and the brevity penalty.
double bleu_corpus(std::span<const CorpusPair> pairs, int max_order = 4);

// LCS-based F1 against each reference; the maximum over references.
double rouge_l(const TokenSeq& candidate, std::span<const TokenSeq> references);

// alpha * BLEU(candidate, references) - (1 - alpha) * BLEU(candidate, source).
double ibleu(const TokenSeq& candidate, std::span<const TokenSeq> references,
             const TokenSeq& source, const MetricConfig& cfg);

// Geometric mean of a formality score and a similarity score, both in [0, 1].
double g_score(double formality, double similarity);

// Mean over ordered pairs i != j of (1 - BLEU(samples[i], {samples[j]}))^2.
double bleu_variance(std::span<const TokenSeq> samples, int order = 4);

// (formality, similarity) per example id, required for g_score.
using AuxScores = std::unordered_map<ExampleId, std::pair<double, double>>;

// Sentence-level score per example. Generations are matched to examples by
// id; iBLEU uses the example input as source.
std::unordered_map<ExampleId, double> per_example_scores(
    MetricKind kind, std::span<const Generation> generations,
    std::span<const Example> examples, const MetricConfig& cfg,
    const AuxScores* aux = nullptr);

// Corpus-level score. BLEU and iBLEU pool n-gram statistics; ROUGE-L and
// G-Score have no pooled form and fall back to the per-example mean.
double corpus_score(MetricKind kind, std::span<const Generation> generations,
                    std::span<const Example> examples, const MetricConfig& cfg,
                    const AuxScores* aux = nullptr);

}  // namespace nlgal

#endif  // NLGAL_METRICS_H_
