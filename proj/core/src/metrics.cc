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

#include "nlgal/metrics.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <numeric>

#include "nlgal/error.h"

namespace nlgal {
namespace {

// Counts of every n-gram of one order, keyed by the tokens joined with a
// unit separator.
using NgramCounts = std::unordered_map<std::string, int>;

struct NgramStats {
  std::size_t length = 0;
  std::vector<NgramCounts> by_order;  // index n-1
};

NgramStats collect(const TokenSeq& seq, int max_order) {
  NgramStats stats;
  stats.length = seq.size();
  stats.by_order.resize(static_cast<std::size_t>(max_order));
  for (int n = 1; n <= max_order; ++n) {
    auto& counts = stats.by_order[static_cast<std::size_t>(n - 1)];
    if (seq.size() < static_cast<std::size_t>(n)) continue;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= seq.size(); ++i) {
      std::string key = seq[i];
      for (int j = 1; j < n; ++j) {
        key.push_back('\x1f');
        key += seq[i + static_cast<std::size_t>(j)];
      }
      ++counts[key];
    }
  }
  return stats;
}

// Per-order clipped matches and candidate n-gram totals.
struct MatchCounts {
  std::vector<long long> clipped;
  std::vector<long long> total;
};

MatchCounts match(const NgramStats& cand, std::span<const NgramStats* const> refs,
                  int max_order) {
  MatchCounts m;
  m.clipped.assign(static_cast<std::size_t>(max_order), 0);
  m.total.assign(static_cast<std::size_t>(max_order), 0);
  for (int n = 1; n <= max_order; ++n) {
    const auto o = static_cast<std::size_t>(n - 1);
    for (const auto& [gram, count] : cand.by_order[o]) {
      int max_ref = 0;
      for (const NgramStats* r : refs) {
        auto it = r->by_order[o].find(gram);
        if (it != r->by_order[o].end()) max_ref = std::max(max_ref, it->second);
      }
      m.clipped[o] += std::min(count, max_ref);
      m.total[o] += count;
    }
  }
  return m;
}

// Reference length closest to `cand_len`; ties prefer the shorter one.
std::size_t closest_ref_length(std::size_t cand_len,
                               std::span<const NgramStats* const> refs) {
  std::size_t best = refs.front()->length;
  for (const NgramStats* r : refs) {
    const auto d = std::llabs(static_cast<long long>(r->length) -
                              static_cast<long long>(cand_len));
    const auto bd = std::llabs(static_cast<long long>(best) -
                               static_cast<long long>(cand_len));
    if (d < bd || (d == bd && r->length < best)) best = r->length;
  }
  return best;
}

double brevity_penalty(double cand_len, double ref_len) {
  if (cand_len >= ref_len) return 1.0;
  return std::exp(1.0 - ref_len / cand_len);
}

double smoothed_bleu(const NgramStats& cand, std::span<const NgramStats* const> refs,
                     int max_order) {
  if (cand.length == 0) return 0.0;
  const MatchCounts m = match(cand, refs, max_order);
  if (m.clipped[0] == 0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t o = 0; o < m.clipped.size(); ++o) {
    double p;
    if (m.clipped[o] > 0) {
      p = static_cast<double>(m.clipped[o]) / static_cast<double>(m.total[o]);
    } else {
      p = 1.0 / (2.0 * static_cast<double>(std::max<long long>(1, m.total[o])));
    }
    log_sum += std::log(p);
  }
  const double geo = std::exp(log_sum / max_order);
  const double r = static_cast<double>(closest_ref_length(cand.length, refs));
  return geo * brevity_penalty(static_cast<double>(cand.length), r);
}

void check_order(int max_order) {
  if (max_order < 1) throw Error("BLEU max order must be >= 1");
}

std::size_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<TokenSeq> tokenize_all(const std::vector<std::string>& texts) {
  std::vector<TokenSeq> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(tokenize(t));
  return out;
}

std::unordered_map<ExampleId, const Generation*> index_generations(
    std::span<const Generation> generations) {
  std::unordered_map<ExampleId, const Generation*> index;
  for (const auto& g : generations) index[g.example_id] = &g;
  return index;
}

const Generation& generation_for(
    const std::unordered_map<ExampleId, const Generation*>& index,
    const ExampleId& id) {
  auto it = index.find(id);
  if (it == index.end()) throw Error("no generation for example '" + id + "'");
  return *it->second;
}

}  // namespace

std::string_view to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::kBleu: return "bleu";
    case MetricKind::kIbleu: return "ibleu";
    case MetricKind::kRougeL: return "rouge_l";
    case MetricKind::kGScore: return "g_score";
  }
  return "unknown";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "bleu") return MetricKind::kBleu;
  if (name == "ibleu") return MetricKind::kIbleu;
  if (name == "rouge_l") return MetricKind::kRougeL;
  if (name == "g_score") return MetricKind::kGScore;
  throw Error("unknown metric '" + std::string(name) + "'");
}

void MetricConfig::validate() const {
  if (!(ibleu_alpha >= 0.0 && ibleu_alpha <= 1.0)) throw Error("ibleu_alpha must lie in [0, 1]");
  if (bleu_max_order < 1) throw Error("bleu_max_order must be >= 1");
  if (variance_bleu_order < 1) throw Error("variance_bleu_order must be >= 1");
}

TokenSeq tokenize(std::string_view text) {
  TokenSeq tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isspace(c)) {
      flush();
    } else if (c < 0x80 && std::ispunct(c)) {
      flush();
      tokens.emplace_back(1, ch);
    } else if (c < 0x80) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      current.push_back(ch);
    }
  }
  flush();
  return tokens;
}

double bleu_sentence(const TokenSeq& candidate, std::span<const TokenSeq> references,
                     int max_order) {
  check_order(max_order);
  if (references.empty()) throw Error("bleu_sentence: no references");
  if (candidate.empty()) return 0.0;
  const NgramStats cand = collect(candidate, max_order);
  std::vector<NgramStats> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(collect(r, max_order));
  std::vector<const NgramStats*> ref_ptrs;
  for (const auto& r : refs) ref_ptrs.push_back(&r);
  return smoothed_bleu(cand, ref_ptrs, max_order);
}

double bleu_corpus(std::span<const CorpusPair> pairs, int max_order) {
  check_order(max_order);
  if (pairs.empty()) throw Error("bleu_corpus: empty corpus");
  std::vector<long long> clipped(static_cast<std::size_t>(max_order), 0);
  std::vector<long long> total(static_cast<std::size_t>(max_order), 0);
  double cand_len = 0.0, ref_len = 0.0;
  for (const auto& pair : pairs) {
    if (pair.references.empty()) throw Error("bleu_corpus: pair without references");
    const NgramStats cand = collect(pair.candidate, max_order);
    std::vector<NgramStats> refs;
    for (const auto& r : pair.references) refs.push_back(collect(r, max_order));
    std::vector<const NgramStats*> ref_ptrs;
    for (const auto& r : refs) ref_ptrs.push_back(&r);
    const MatchCounts m = match(cand, ref_ptrs, max_order);
    for (std::size_t o = 0; o < clipped.size(); ++o) {
      clipped[o] += m.clipped[o];
      total[o] += m.total[o];
    }
    cand_len += static_cast<double>(cand.length);
    ref_len += static_cast<double>(closest_ref_length(cand.length, ref_ptrs));
  }
  if (cand_len == 0.0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t o = 0; o < clipped.size(); ++o) {
    if (clipped[o] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped[o]) / static_cast<double>(total[o]));
  }
  return std::exp(log_sum / max_order) * brevity_penalty(cand_len, ref_len);
}

double rouge_l(const TokenSeq& candidate, std::span<const TokenSeq> references) {
  if (references.empty()) throw Error("rouge_l: no references");
  double best = 0.0;
  for (const auto& ref : references) {
    const std::size_t lcs = lcs_length(candidate, ref);
    if (lcs == 0) continue;
    const double p = static_cast<double>(lcs) / static_cast<double>(candidate.size());
    const double r = static_cast<double>(lcs) / static_cast<double>(ref.size());
    best = std::max(best, 2.0 * p * r / (p + r));
  }
  return best;
}

double ibleu(const TokenSeq& candidate, std::span<const TokenSeq> references,
             const TokenSeq& source, const MetricConfig& cfg) {
  const double alpha = cfg.ibleu_alpha;
  const double to_refs = bleu_sentence(candidate, references, cfg.bleu_max_order);
  const TokenSeq src[] = {source};
  const double to_src = bleu_sentence(candidate, src, cfg.bleu_max_order);
  return alpha * to_refs - (1.0 - alpha) * to_src;
}

double g_score(double formality, double similarity) {
  if (!(formality >= 0.0 && formality <= 1.0) || !(similarity >= 0.0 && similarity <= 1.0)) {
    throw Error("g_score: inputs must lie in [0, 1]");
  }
  return std::sqrt(formality * similarity);
}

double bleu_variance(std::span<const TokenSeq> samples, int order) {
  check_order(order);
  const std::size_t t = samples.size();
  if (t < 2) throw Error("bleu_variance: need at least 2 samples");
  std::vector<NgramStats> stats;
  stats.reserve(t);
  for (const auto& s : samples) stats.push_back(collect(s, order));
  double sum = 0.0;
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) {
      if (i == j) continue;
      const NgramStats* ref[] = {&stats[j]};
      const double d = 1.0 - smoothed_bleu(stats[i], ref, order);
      sum += d * d;
    }
  }
  return sum / static_cast<double>(t * (t - 1));
}

std::unordered_map<ExampleId, double> per_example_scores(
    MetricKind kind, std::span<const Generation> generations,
    std::span<const Example> examples, const MetricConfig& cfg, const AuxScores* aux) {
  cfg.validate();
  if (kind == MetricKind::kGScore && aux == nullptr) {
    throw Error("g_score requires formality and similarity scores");
  }
  const auto index = index_generations(generations);
  std::unordered_map<ExampleId, double> scores;
  scores.reserve(examples.size());
  for (const auto& ex : examples) {
    double value = 0.0;
    if (kind == MetricKind::kGScore) {
      auto it = aux->find(ex.id);
      if (it == aux->end()) throw Error("missing g_score inputs for '" + ex.id + "'");
      value = g_score(it->second.first, it->second.second);
    } else {
      const TokenSeq cand = tokenize(generation_for(index, ex.id).text);
      const auto refs = tokenize_all(ex.references);
      switch (kind) {
        case MetricKind::kBleu: value = bleu_sentence(cand, refs, cfg.bleu_max_order); break;
        case MetricKind::kIbleu: value = ibleu(cand, refs, tokenize(ex.input), cfg); break;
        case MetricKind::kRougeL: value = rouge_l(cand, refs); break;
        case MetricKind::kGScore: break;
      }
    }
    scores.emplace(ex.id, value);
  }
  return scores;
}

double corpus_score(MetricKind kind, std::span<const Generation> generations,
                    std::span<const Example> examples, const MetricConfig& cfg,
                    const AuxScores* aux) {
  if (examples.empty()) throw Error("corpus_score: no examples");
  if (kind == MetricKind::kBleu || kind == MetricKind::kIbleu) {
    const auto index = index_generations(generations);
    std::vector<CorpusPair> to_refs, to_src;
    for (const auto& ex : examples) {
      TokenSeq cand = tokenize(generation_for(index, ex.id).text);
      to_refs.push_back({cand, tokenize_all(ex.references)});
      if (kind == MetricKind::kIbleu) to_src.push_back({cand, {tokenize(ex.input)}});
    }
    const double refs_bleu = bleu_corpus(to_refs, cfg.bleu_max_order);
    if (kind == MetricKind::kBleu) return refs_bleu;
    return cfg.ibleu_alpha * refs_bleu -
           (1.0 - cfg.ibleu_alpha) * bleu_corpus(to_src, cfg.bleu_max_order);
  }
  const auto scores = per_example_scores(kind, generations, examples, cfg, aux);
  double sum = 0.0;
  for (const auto& ex : examples) sum += scores.at(ex.id);
  return sum / static_cast<double>(examples.size());
}

}  // namespace nlgal
