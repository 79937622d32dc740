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

#ifndef NLGAL_ANALYSIS_H_
#define NLGAL_ANALYSIS_H_

// Batch-level diagnostics of selected examples and cross-run statistics:
// relative gains over random selection, Wilcoxon signed-rank tests with
// Bonferroni correction, and bootstrap confidence intervals.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nlgal/corpus.h"
#include "nlgal/geometry.h"
#include "nlgal/records.h"

namespace nlgal {

struct BatchProfile {
  std::string strategy;
  double outlier_score = 0.0;
  double diversity = 0.0;
  std::size_t batch_size = 0;
};

// Mean over the batch of each member's mean distance to its k nearest
// neighbours in the unlabeled pool. Higher means sparser neighbourhoods.
double batch_outlier_score(std::span<const ExampleId> batch, std::span<const ExampleId> pool,
                           const EmbeddingSet& emb, std::size_t k = 10);

// Mean distance of the batch members from the batch centroid.
double batch_diversity(std::span<const ExampleId> batch, const EmbeddingSet& emb);

// (mean over batch - mean over pool) / population std over pool.
double relative_selection_performance(const std::unordered_map<ExampleId, double>& batch_scores,
                                      const std::unordered_map<ExampleId, double>& pool_scores);

// One aligned observation of a strategy and the baseline.
struct GainPoint {
  std::size_t iteration = 0;
  std::size_t repetition = 0;  // 1-based
  double strategy_value = 0.0;
  double baseline_value = 0.0;
  double zero_shot = 0.0;
};

// 100 * (gain_S - gain_R) / gain_R with gain = value - zero_shot. Points with
// a zero baseline gain yield nullopt.
std::vector<std::optional<double>> relative_gains(std::span<const GainPoint> points);

enum class Alternative { kTwoSided, kGreater, kLess };

struct WilcoxonResult {
  double p_value = 1.0;
  double w_plus = 0.0;
  double w_minus = 0.0;
  std::size_t n_pairs = 0;    // all pairs consumed
  std::size_t n_nonzero = 0;  // pairs used for ranking
  std::size_t n_zero = 0;     // discarded zero differences
  bool exact = true;
  bool degenerate = false;    // every difference was zero
};

// Paired Wilcoxon signed-rank test on x - y. Zero differences are dropped,
// tied magnitudes share average ranks. Exact null distribution for up to
// `exact_limit` nonzero pairs, otherwise a normal approximation with tie and
// continuity corrections.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    Alternative alternative = Alternative::kTwoSided,
                                    std::size_t exact_limit = 25);
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    Alternative alternative = Alternative::kTwoSided,
                                    std::size_t exact_limit = 25);

double bonferroni(double p, std::size_t m);

// Percentile bootstrap of the mean.
std::pair<double, double> bootstrap_ci(std::span<const double> values, double level = 0.95,
                                       std::size_t resamples = 10000, std::uint64_t seed = 0);

double mean(std::span<const double> values);

// --- Record-level pipelines -------------------------------------------------

struct SignificanceRow {
  std::string dataset;
  std::string strategy;
  double p_raw = 1.0;
  double p_bonferroni = 1.0;
  bool significant = false;
  WilcoxonResult test;
};

struct SignificanceOptions {
  std::string baseline = "random";
  double alpha = 0.05;
  // Bonferroni family size; defaults to the number of non-baseline
  // strategies of each dataset.
  std::optional<std::size_t> family_size;
  Alternative alternative = Alternative::kTwoSided;
};

// For each dataset and non-baseline strategy, pairs (S_ij, R_ij) over
// iterations i >= 1 and shared seeds j. A row is significant when the
// corrected p is below alpha and the strategy's rank sum dominates.
std::vector<SignificanceRow> significance_table(std::span<const RunRecord> records,
                                                const SignificanceOptions& options = {});

struct GainRow {
  std::string dataset;
  std::string strategy;
  std::size_t iteration = 0;
  std::size_t repetition = 0;
  std::optional<double> relative_gain_pct;
};

std::vector<GainRow> relative_gains_table(std::span<const RunRecord> records,
                                          const std::string& baseline = "random");

struct CurvePoint {
  std::string dataset;
  std::string strategy;
  std::size_t iteration = 0;
  std::size_t labeled_count = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

// Mean metric per (dataset, strategy, iteration) across seeds with a 95%
// bootstrap interval.
std::vector<CurvePoint> learning_curves(std::span<const RunRecord> records,
                                        std::size_t resamples = 10000,
                                        std::uint64_t seed = 0);

}  // namespace nlgal

#endif  // NLGAL_ANALYSIS_H_
