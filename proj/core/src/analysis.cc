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

#include "nlgal/analysis.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "nlgal/error.h"
#include "nlgal/rng.h"

namespace nlgal {
namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Average ranks of |d| (1-based), doubled so they stay integral.
std::vector<long> doubled_ranks(const std::vector<double>& magnitudes,
                                std::vector<std::size_t>* tie_sizes) {
  const std::size_t n = magnitudes.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return magnitudes[a] < magnitudes[b]; });
  std::vector<long> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && magnitudes[order[j + 1]] == magnitudes[order[i]]) ++j;
    // ranks i+1..j+1 averaged, times two
    const long doubled = static_cast<long>(i + 1 + j + 1);
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = doubled;
    if (tie_sizes) tie_sizes->push_back(j - i + 1);
    i = j + 1;
  }
  return ranks;
}

// P(W+ >= w) and P(W+ <= w) under the null, on doubled ranks.
std::pair<double, double> exact_tails(const std::vector<long>& ranks, long observed) {
  long total = 0;
  for (long r : ranks) total += r;
  std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
  counts[0] = 1.0;
  long reach = 0;
  for (long r : ranks) {
    for (long s = reach; s >= 0; --s) {
      if (counts[static_cast<std::size_t>(s)] != 0.0) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
    }
    reach += r;
  }
  const double all = std::ldexp(1.0, static_cast<int>(ranks.size()));
  double upper = 0.0, lower = 0.0;
  for (long s = 0; s <= total; ++s) {
    if (s >= observed) upper += counts[static_cast<std::size_t>(s)];
    if (s <= observed) lower += counts[static_cast<std::size_t>(s)];
  }
  return {upper / all, lower / all};
}

double population_std(const std::vector<double>& v, double m) {
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

using CellKey = std::pair<std::string, std::string>;  // dataset, strategy
// seed -> iteration -> record
using CellRuns = std::map<std::uint64_t, std::map<std::size_t, const RunRecord*>>;

std::map<CellKey, CellRuns> group_records(std::span<const RunRecord> records) {
  std::map<CellKey, CellRuns> out;
  for (const auto& r : records) {
    auto& slot = out[{r.dataset, r.strategy}][r.seed][r.iteration];
    if (slot) {
      throw Error("duplicate record for " + r.dataset + "/" + r.strategy + " seed " +
                  std::to_string(r.seed) + " iteration " + std::to_string(r.iteration));
    }
    slot = &r;
  }
  return out;
}

}  // namespace

double batch_outlier_score(std::span<const ExampleId> batch, std::span<const ExampleId> pool,
                           const EmbeddingSet& emb, std::size_t k) {
  if (batch.empty()) throw Error("batch_outlier_score: empty batch");
  if (pool.size() <= k) throw Error("batch_outlier_score: pool must hold more than k points");
  double sum = 0.0;
  for (const auto& id : batch) sum += knn_mean_distance(id, pool, emb, k);
  return sum / static_cast<double>(batch.size());
}

double batch_diversity(std::span<const ExampleId> batch, const EmbeddingSet& emb) {
  if (batch.empty()) throw Error("batch_diversity: empty batch");
  std::vector<Vector> points;
  points.reserve(batch.size());
  for (const auto& id : batch) points.push_back(emb.at(id));
  const Vector c = centroid(points);
  double sum = 0.0;
  for (const auto& p : points) sum += euclidean(p, c);
  return sum / static_cast<double>(points.size());
}

double relative_selection_performance(const std::unordered_map<ExampleId, double>& batch_scores,
                                      const std::unordered_map<ExampleId, double>& pool_scores) {
  if (batch_scores.empty()) throw Error("relative_selection_performance: empty batch");
  if (pool_scores.size() < 2) throw Error("relative_selection_performance: pool needs 2 scores");
  std::vector<double> pool;
  pool.reserve(pool_scores.size());
  for (const auto& [id, v] : pool_scores) pool.push_back(v);
  std::sort(pool.begin(), pool.end());  // summation order independent of hashing
  double batch_sum = 0.0;
  std::vector<double> batch;
  for (const auto& [id, v] : batch_scores) {
    if (!pool_scores.count(id)) throw Error("relative_selection_performance: '" + id + "' not in pool");
    batch.push_back(v);
  }
  std::sort(batch.begin(), batch.end());
  for (double v : batch) batch_sum += v;
  const double pool_mean = mean(pool);
  const double sd = population_std(pool, pool_mean);
  if (sd == 0.0) throw Error("relative_selection_performance: degenerate pool (zero std)");
  return (batch_sum / static_cast<double>(batch.size()) - pool_mean) / sd;
}

std::vector<std::optional<double>> relative_gains(std::span<const GainPoint> points) {
  std::vector<std::optional<double>> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double gain_s = p.strategy_value - p.zero_shot;
    const double gain_r = p.baseline_value - p.zero_shot;
    if (gain_r == 0.0) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(100.0 * (gain_s - gain_r) / gain_r);
    }
  }
  return out;
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    Alternative alternative, std::size_t exact_limit) {
  if (x.size() != y.size()) throw Error("wilcoxon: series lengths differ");
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
  return wilcoxon_signed_rank(d, alternative, exact_limit);
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences, Alternative alternative,
                                    std::size_t exact_limit) {
  WilcoxonResult res;
  res.n_pairs = differences.size();
  std::vector<double> mags;
  std::vector<bool> positive;
  for (double d : differences) {
    if (!std::isfinite(d)) throw Error("wilcoxon: non-finite difference");
    if (d == 0.0) {
      ++res.n_zero;
      continue;
    }
    mags.push_back(std::fabs(d));
    positive.push_back(d > 0.0);
  }
  res.n_nonzero = mags.size();
  if (mags.empty()) {
    res.p_value = 1.0;
    res.degenerate = true;
    return res;
  }
  std::vector<std::size_t> ties;
  const auto ranks = doubled_ranks(mags, &ties);
  long w_plus2 = 0, w_minus2 = 0;
  for (std::size_t i = 0; i < ranks.size(); ++i) (positive[i] ? w_plus2 : w_minus2) += ranks[i];
  res.w_plus = static_cast<double>(w_plus2) / 2.0;
  res.w_minus = static_cast<double>(w_minus2) / 2.0;

  const double n = static_cast<double>(mags.size());
  if (mags.size() <= exact_limit) {
    res.exact = true;
    const auto [upper, lower] = exact_tails(ranks, w_plus2);
    switch (alternative) {
      case Alternative::kGreater: res.p_value = upper; break;
      case Alternative::kLess: res.p_value = lower; break;
      case Alternative::kTwoSided: res.p_value = std::min(1.0, 2.0 * std::min(upper, lower)); break;
    }
    return res;
  }

  res.exact = false;
  const double mu = n * (n + 1.0) / 4.0;
  double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
  for (std::size_t t : ties) {
    const double tt = static_cast<double>(t);
    var -= (tt * tt * tt - tt) / 48.0;
  }
  if (var <= 0.0) {
    res.p_value = 1.0;
    return res;
  }
  const double sd = std::sqrt(var);
  const double w = res.w_plus;
  switch (alternative) {
    case Alternative::kGreater: res.p_value = 1.0 - normal_cdf((w - mu - 0.5) / sd); break;
    case Alternative::kLess: res.p_value = normal_cdf((w - mu + 0.5) / sd); break;
    case Alternative::kTwoSided: {
      const double z = std::max(0.0, std::fabs(w - mu) - 0.5) / sd;
      res.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
      break;
    }
  }
  return res;
}

double bonferroni(double p, std::size_t m) {
  if (m == 0) throw Error("bonferroni: m must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("bonferroni: p outside [0, 1]");
  return std::min(1.0, p * static_cast<double>(m));
}

double mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean of empty sequence");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::pair<double, double> bootstrap_ci(std::span<const double> values, double level,
                                       std::size_t resamples, std::uint64_t seed) {
  if (values.empty()) throw Error("bootstrap_ci: empty input");
  if (!(level > 0.0 && level < 1.0)) throw Error("bootstrap_ci: level must be in (0, 1)");
  if (resamples == 0) throw Error("bootstrap_ci: resamples must be positive");
  const double m = mean(values);
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    return {values[0], values[0]};
  }
  Rng rng(derive_seed(seed, "bootstrap"));
  std::vector<double> means(resamples);
  for (auto& out : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) sum += values[rng.below(values.size())];
    out = sum / static_cast<double>(values.size());
  }
  std::sort(means.begin(), means.end());
  const double alpha = (1.0 - level) / 2.0;
  double lo = quantile_sorted(means, alpha);
  double hi = quantile_sorted(means, 1.0 - alpha);
  // Keep low <= mean <= high under rounding.
  lo = std::min(lo, m);
  hi = std::max(hi, m);
  return {lo, hi};
}

std::vector<SignificanceRow> significance_table(std::span<const RunRecord> records,
                                                const SignificanceOptions& options) {
  if (options.family_size && *options.family_size == 0) throw Error("family_size must be >= 1");
  const auto cells = group_records(records);
  std::map<std::string, std::vector<std::string>> strategies_by_dataset;
  for (const auto& [key, runs] : cells) {
    if (key.second != options.baseline) strategies_by_dataset[key.first].push_back(key.second);
  }
  std::vector<SignificanceRow> out;
  for (const auto& [dataset, strategies] : strategies_by_dataset) {
    auto base_it = cells.find({dataset, options.baseline});
    if (base_it == cells.end()) {
      throw Error("no baseline '" + options.baseline + "' records for dataset '" + dataset + "'");
    }
    const CellRuns& base = base_it->second;
    const std::size_t m = options.family_size.value_or(strategies.size());
    for (const auto& strategy : strategies) {
      const CellRuns& runs = cells.at({dataset, strategy});
      std::vector<double> s, r;
      for (const auto& [seed, iters] : runs) {
        auto b = base.find(seed);
        if (b == base.end()) continue;
        for (const auto& [it, rec] : iters) {
          if (it == 0) continue;
          auto bi = b->second.find(it);
          if (bi == b->second.end()) continue;
          s.push_back(rec->metric_value);
          r.push_back(bi->second->metric_value);
        }
      }
      if (s.empty()) throw Error("no aligned pairs for " + dataset + "/" + strategy);
      SignificanceRow row;
      row.dataset = dataset;
      row.strategy = strategy;
      row.test = wilcoxon_signed_rank(s, r, options.alternative);
      row.p_raw = row.test.p_value;
      row.p_bonferroni = bonferroni(row.p_raw, m);
      row.significant = row.p_bonferroni < options.alpha && row.test.w_plus > row.test.w_minus;
      out.push_back(std::move(row));
    }
  }
  return out;
}

std::vector<GainRow> relative_gains_table(std::span<const RunRecord> records,
                                          const std::string& baseline) {
  const auto cells = group_records(records);
  std::vector<GainRow> out;
  for (const auto& [key, runs] : cells) {
    if (key.second == baseline) continue;
    auto base_it = cells.find({key.first, baseline});
    if (base_it == cells.end()) {
      throw Error("no baseline '" + baseline + "' records for dataset '" + key.first + "'");
    }
    const CellRuns& base = base_it->second;
    std::size_t repetition = 0;
    for (const auto& [seed, iters] : runs) {
      auto b = base.find(seed);
      if (b == base.end()) continue;
      ++repetition;
      const RunRecord* zero = nullptr;
      if (auto z = b->second.find(0); z != b->second.end()) {
        zero = z->second;
      } else if (auto zs = iters.find(0); zs != iters.end()) {
        zero = zs->second;
      } else {
        throw Error("missing zero-shot record for " + key.first + " seed " + std::to_string(seed));
      }
      const double zero_shot = zero->metric_value;
      std::vector<GainPoint> points;
      for (const auto& [it, rec] : iters) {
        if (it == 0) continue;
        auto bi = b->second.find(it);
        if (bi == b->second.end()) continue;
        points.push_back({it, repetition, rec->metric_value, bi->second->metric_value, zero_shot});
      }
      const auto gains = relative_gains(points);
      for (std::size_t i = 0; i < points.size(); ++i) {
        out.push_back({key.first, key.second, points[i].iteration, repetition, gains[i]});
      }
    }
  }
  return out;
}

std::vector<CurvePoint> learning_curves(std::span<const RunRecord> records, std::size_t resamples,
                                        std::uint64_t seed) {
  std::map<std::tuple<std::string, std::string, std::size_t>, std::vector<const RunRecord*>> groups;
  for (const auto& r : records) groups[{r.dataset, r.strategy, r.iteration}].push_back(&r);
  std::vector<CurvePoint> out;
  for (const auto& [key, recs] : groups) {
    std::vector<const RunRecord*> sorted = recs;
    std::sort(sorted.begin(), sorted.end(),
              [](const RunRecord* a, const RunRecord* b) { return a->seed < b->seed; });
    std::vector<double> values;
    for (const auto* r : sorted) values.push_back(r->metric_value);
    CurvePoint p;
    p.dataset = std::get<0>(key);
    p.strategy = std::get<1>(key);
    p.iteration = std::get<2>(key);
    p.labeled_count = sorted.front()->labeled_count;
    p.n = values.size();
    p.mean = mean(values);
    const auto stream = derive_seed(seed, p.dataset + "/" + p.strategy, p.iteration);
    std::tie(p.ci_low, p.ci_high) = bootstrap_ci(values, 0.95, resamples, stream);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace nlgal
