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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Everything runs on the built-in toy backend.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nlgal/analysis.h"
#include "nlgal/config.h"
#include "nlgal/corpus.h"
#include "nlgal/harness.h"
#include "nlgal/metrics.h"
#include "nlgal/records.h"
#include "nlgal/rng.h"
#include "nlgal/strategies.h"
#include "nlgal/synthetic.h"
#include "nlgal/toy_backend.h"
#include "oracles.h"
#include "test_support.h"

namespace nlgal {
namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// Synthetic task on disk plus a config pointing at it.
struct Workspace {
  testing::TempDir dir;
  RunConfig base;

  Workspace() {
    const auto task = synthetic_text_task({}, 2026);
    write_dataset(task.train, dir.path() / "train.jsonl");
    write_dataset(task.test, dir.path() / "test.jsonl");
    nlohmann::json j = {{"dataset", {{"name", "synth"}, {"train", "train.jsonl"}, {"test", "test.jsonl"}}}};
    base = config_from_json(j, dir.path());
  }

  RunConfig config(StrategyKind s, std::vector<std::uint64_t> seeds) const {
    RunConfig c = base;
    c.strategy = s;
    c.repetitions = seeds.size();
    c.seeds = std::move(seeds);
    c.validate();
    return c;
  }
};

std::vector<std::uint64_t> iota_seeds(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i;
  return s;
}

// Full-schedule runs of every strategy, persisted twice into separate
// directories, with per-seed wall times.
struct FullRuns {
  std::map<std::string, std::vector<RunRecord>> first;
  std::map<std::string, double> seconds_per_seed;
  std::map<std::string, std::string> bytes_a, bytes_b;
  std::map<std::string, std::string> error;
};

FullRuns full_runs(const Workspace& ws) {
  FullRuns out;
  const TaskData data = load_task(ws.base);
  testing::TempDir a, b;
  for (StrategyKind k : all_strategies()) {
    const std::string name(to_string(k));
    const auto config = ws.config(k, {7});
    for (int pass = 0; pass < 2; ++pass) {
      ToyBackend toy(config.backend.toy);
      const auto t0 = Clock::now();
      const auto res = run_seed(config, data, toy, 7);
      const double dt = seconds(t0);
      if (!res.complete) out.error[name] = res.error;
      const auto& dir = pass == 0 ? a.path() : b.path();
      const auto sub = dir / name;
      persist(res.records, sub, {.create_dir = true});
      (pass == 0 ? out.bytes_a : out.bytes_b)[name] = testing::read_file(sub / kRecordsFile);
      if (pass == 0) {
        out.first[name] = res.records;
        out.seconds_per_seed[name] = dt;
      }
    }
  }
  return out;
}

Outcome ac1(const FullRuns& runs) {
  const auto expected = default_schedule().cumulative();
  Outcome o;
  double worst = 0;
  for (const auto& [name, recs] : runs.first) {
    if (runs.error.count(name)) {
      o.pass = false;
      o.detail += name + " failed: " + runs.error.at(name) + "; ";
      continue;
    }
    if (recs.size() != 19) {
      o.pass = false;
      o.detail += name + " emitted " + std::to_string(recs.size()) + " records; ";
    }
    for (std::size_t i = 0; i < recs.size() && i < expected.size(); ++i) {
      if (recs[i].labeled_count != expected[i] || recs[i].iteration != i) {
        o.pass = false;
        o.detail += name + " wrong labeled count at iteration " + std::to_string(i) + "; ";
        break;
      }
    }
    const double t = runs.seconds_per_seed.at(name);
    worst = std::max(worst, t);
    if (t >= 60.0) {
      o.pass = false;
      o.detail += name + " took " + fmt("%.1f", t) + " s; ";
    }
  }
  o.detail += "6 strategies x 19 records, counts 0..200 by 20 then ..1000 by 100, slowest seed " +
              fmt("%.1f", worst) + " s";
  return o;
}

Outcome ac2(const FullRuns& runs) {
  Outcome o;
  std::size_t bytes = 0;
  for (const auto& [name, text] : runs.bytes_a) {
    bytes += text.size();
    if (text != runs.bytes_b.at(name) || text.empty()) {
      o.pass = false;
      o.detail += name + " records differ; ";
    }
  }
  o.detail += "records.csv byte-identical across two executions for all strategies (" +
              std::to_string(bytes) + " bytes)";
  return o;
}

Outcome ac3() {
  Rng rng(3);
  std::size_t instances = 0, mismatches = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    const std::size_t n_points = 2 + rng.below(49);
    const std::size_t dim = 1 + rng.below(8);
    EmbeddingSet emb(dim);
    std::vector<ExampleId> ids;
    for (std::size_t i = 0; i < n_points; ++i) {
      char buf[24];
      std::snprintf(buf, sizeof(buf), "x%02zu", i);
      Vector v(dim);
      for (auto& x : v) x = trial % 4 == 0 ? static_cast<double>(rng.below(3)) : rng.normal();
      emb.insert(buf, v);
      ids.push_back(buf);
    }
    shuffle(ids, rng);
    const std::size_t n_labeled = 1 + rng.below(n_points - 1);
    std::vector<ExampleId> labeled(ids.begin(), ids.begin() + static_cast<long>(n_labeled));
    std::vector<ExampleId> unlabeled(ids.begin() + static_cast<long>(n_labeled), ids.end());
    const PoolState pool(testing::make_split(ids), unlabeled, labeled);
    SelectionContext ctx;
    ctx.pool = &pool;
    ctx.embeddings = &emb;
    const std::size_t n = 1 + rng.below(unlabeled.size());
    if (coreset_greedy(ctx, n).ids != testing::oracle_k_center(unlabeled, labeled, emb, n)) ++mismatches;
    ++instances;
  }
  return {mismatches == 0 && instances >= 1000,
          std::to_string(instances) + " random instances (<= 50 points, dims <= 8), " +
              std::to_string(mismatches) + " id-sequence mismatches"};
}

Outcome ac4() {
  Outcome o;
  const std::vector<std::vector<TokenSeq>> ref_sets = {
      {{"a", "b", "c", "a"}},
      {{"a", "a", "b"}, {"c", "b", "a", "a", "b", "c"}},
      {{"c", "c", "c", "c", "c", "c", "c", "c"}, {"a", "b"}},
  };
  const auto cands = testing::all_sequences({"a", "b", "c"}, 8);
  double worst = 0;
  for (const auto& refs : ref_sets) {
    for (int order : {1, 2, 4}) {
      for (const auto& c : cands) {
        worst = std::max(worst, std::abs(bleu_sentence(c, refs, order) - testing::oracle_bleu(c, refs, order)));
      }
    }
  }
  if (worst > 1e-12) o.pass = false;

  Rng rng(4);
  std::size_t rouge_bad = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    auto seq = [&] {
      TokenSeq s(rng.below(12));
      for (auto& t : s) t = std::string(1, static_cast<char>('a' + rng.below(4)));
      return s;
    };
    const TokenSeq c = seq();
    std::vector<TokenSeq> refs(1 + rng.below(3));
    for (auto& r : refs) r = seq();
    if (rouge_l(c, refs) != testing::oracle_rouge_l(c, refs)) ++rouge_bad;
  }
  if (rouge_bad) o.pass = false;

  const double bleu_hand = bleu_sentence({"the", "the", "the", "the"}, std::vector<TokenSeq>{{"the", "cat"}}, 1);
  const double rouge_hand = rouge_l({"the", "cat", "sat"}, std::vector<TokenSeq>{{"the", "cat", "ate"}});
  if (bleu_hand != 0.25 || rouge_hand != 2.0 / 3.0) o.pass = false;
  o.detail = "BLEU max |diff| " + fmt("%.2e", worst) + " over " + std::to_string(cands.size() * 9) +
             " cases; ROUGE-L " + std::to_string(rouge_bad) + "/3000 mismatches; hand cases " +
             fmt("%.17g", bleu_hand) + ", " + fmt("%.17g", rouge_hand);
  return o;
}

Outcome ac5(const std::vector<RunRecord>& five_seed_records) {
  Outcome o;
  // Distinct magnitudes: only the sign pattern over ranks matters, so every
  // pattern for n <= 10 covers all such vectors.
  Rng rng(5);
  std::size_t vectors = 0, bad = 0;
  for (std::size_t n = 1; n <= 10; ++n) {
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<double> mags(n);
      for (std::size_t i = 0; i < n; ++i) mags[i] = static_cast<double>(i + 1) + 0.5 * rng.uniform();
      shuffle(mags, rng);
      std::vector<double> d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = (mask >> i & 1) ? mags[i] : -mags[i];
      const auto want = testing::enumerate_wilcoxon(d);
      if (std::abs(wilcoxon_signed_rank(d).p_value - want.p_two_sided) > 1e-12) ++bad;
      ++vectors;
    }
  }
  if (bad) o.pass = false;
  const double p123 = wilcoxon_signed_rank(std::vector<double>{1, 2, 3}).p_value;
  if (p123 != 0.25) o.pass = false;
  const auto rows = significance_table(five_seed_records);
  std::string pairs;
  for (const auto& r : rows) {
    pairs += " " + r.strategy + "=" + std::to_string(r.test.n_pairs);
    if (r.test.n_pairs != 90) o.pass = false;
  }
  if (rows.empty()) o.pass = false;
  o.detail = std::to_string(vectors) + " sign patterns, " + std::to_string(bad) + " mismatches; [1,2,3] -> " +
             fmt("%.17g", p123) + "; pairs:" + pairs;
  return o;
}

Outcome ac6() {
  std::size_t div = 0, co_out = 0, idds_out = 0;
  const std::size_t seeds = 50, batch = 100, k = 10;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    const auto pc = planted_clusters({}, seed);
    const PoolState pool(testing::make_split(pc.ids), pc.ids);
    SelectionContext ctx;
    ctx.pool = &pool;
    ctx.embeddings = &pc.embeddings;
    ctx.rng_seed = derive_seed(seed, "selection");
    const auto r = random_select(ctx, batch).ids;
    const auto c = coreset_greedy(ctx, batch).ids;
    const auto i = idds_select(ctx, batch).ids;
    if (batch_diversity(c, pc.embeddings) > batch_diversity(r, pc.embeddings)) ++div;
    const double out_r = batch_outlier_score(r, pc.ids, pc.embeddings, k);
    if (batch_outlier_score(c, pc.ids, pc.embeddings, k) > out_r) ++co_out;
    if (batch_outlier_score(i, pc.ids, pc.embeddings, k) < out_r) ++idds_out;
  }
  const bool pass = div * 100 >= 95 * seeds && co_out * 100 >= 90 * seeds && idds_out * 100 >= 90 * seeds;
  return {pass, "coreset diversity > random in " + std::to_string(div) + "/50, coreset outlier > random in " +
                    std::to_string(co_out) + "/50, idds outlier < random in " + std::to_string(idds_out) + "/50"};
}

Outcome ac7(const Workspace& ws) {
  const TaskData data = load_task(ws.base);
  const std::vector<StrategyKind> strategies = all_strategies();
  std::map<std::string, double> sum;
  const std::size_t seeds = 20;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    ToyBackend toy(ws.base.backend.toy);
    for (const auto& a : analyze_first_iteration(ws.base, data, toy, strategies, seed)) {
      sum[a.profile.strategy] += a.relative_performance;
    }
  }
  std::map<std::string, double> avg;
  for (const auto& [s, v] : sum) avg[s] = v / static_cast<double>(seeds);
  bool pass = avg["mc_dropout"] < 0 && avg["oracle"] < 0 && std::abs(avg["random"]) <= 0.15;
  for (const auto& [s, v] : avg) {
    if (s != "oracle" && !(avg["oracle"] < v)) pass = false;
  }
  std::string detail = "mean relative performance over 20 seeds:";
  for (const auto& [s, v] : avg) detail += " " + s + "=" + fmt("%.3f", v);
  return {pass, detail};
}

Outcome ac8(const Workspace& ws, std::vector<RunRecord>* random_records) {
  const std::size_t seeds = 20;
  const auto config = ws.config(StrategyKind::kRandom, iota_seeds(seeds));
  const TaskData data = load_task(config);
  ToyBackend toy(config.backend.toy);
  const auto outcomes = run(config, data, toy);
  Outcome o;
  std::vector<double> mean_curve(19, 0.0);
  std::size_t beat = 0;
  for (const auto& s : outcomes) {
    if (!s.complete || s.records.size() != 19) {
      o.pass = false;
      o.detail += "seed " + std::to_string(s.seed) + " incomplete; ";
      continue;
    }
    if (s.records[18].metric_value > s.records[0].metric_value) ++beat;
    for (std::size_t i = 0; i < 19; ++i) mean_curve[i] += s.records[i].metric_value / static_cast<double>(seeds);
    random_records->insert(random_records->end(), s.records.begin(), s.records.end());
  }
  double worst_drop = 0;
  for (std::size_t i = 1; i < 19; ++i) worst_drop = std::max(worst_drop, mean_curve[i - 1] - mean_curve[i]);
  if (beat != seeds || worst_drop > 0.01) o.pass = false;
  o.detail += "final > zero-shot in " + std::to_string(beat) + "/20 seeds; mean " + fmt("%.3f", mean_curve[0]) +
              " -> " + fmt("%.3f", mean_curve[18]) + "; largest step drop " + fmt("%.4f", std::max(0.0, worst_drop));
  return o;
}

Outcome ac9(const std::vector<RunRecord>& five_seed_records) {
  Outcome o;
  const auto [lo, hi] = bootstrap_ci(std::vector<double>(5, 0.37));
  if (lo != 0.37 || hi != 0.37) o.pass = false;
  const double b = bonferroni(0.01, 4);
  if (b != 0.04) o.pass = false;
  std::map<std::string, std::size_t> count;
  for (const auto& g : relative_gains_table(five_seed_records)) ++count[g.dataset + "/" + g.strategy];
  std::string pts;
  for (const auto& [k, v] : count) {
    pts += " " + k + "=" + std::to_string(v);
    if (v != 90) o.pass = false;
  }
  if (count.empty()) o.pass = false;
  o.detail = "bootstrap width " + fmt("%.3g", hi - lo) + "; bonferroni(0.01,4) = " + fmt("%.17g", b) +
             "; gain points:" + pts;
  return o;
}

}  // namespace
}  // namespace nlgal

int main() {
  using namespace nlgal;
  std::map<std::string, std::pair<std::string, Outcome>> results;
  auto check = [&](const char* id, const char* title, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    results[id] = {title, o};
  };

  Workspace ws;
  FullRuns runs;
  std::string runs_error;
  try {
    runs = full_runs(ws);
  } catch (const std::exception& e) {
    runs_error = e.what();
  }
  auto with_runs = [&](Outcome (*f)(const FullRuns&)) {
    return [&, f]() -> Outcome {
      if (!runs_error.empty()) return {false, "full runs aborted: " + runs_error};
      return f(runs);
    };
  };
  check("AC1", "schedule fidelity", with_runs(ac1));
  check("AC2", "determinism", with_runs(ac2));
  check("AC3", "coreset k-center oracle", ac3);
  check("AC4", "metric oracles", ac4);

  // Five seeds of coreset plus the first five random seeds feed the
  // significance and gains pipelines.
  std::vector<RunRecord> random20, five_seeds;
  check("AC8", "toy learning curve", [&] { return ac8(ws, &random20); });
  for (const auto& r : random20) {
    if (r.seed < 5) five_seeds.push_back(r);
  }
  try {
    const auto config = ws.config(StrategyKind::kCoreset, iota_seeds(5));
    const TaskData data = load_task(config);
    ToyBackend toy(config.backend.toy);
    for (const auto& s : run(config, data, toy)) five_seeds.insert(five_seeds.end(), s.records.begin(), s.records.end());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "coreset runs failed: %s\n", e.what());
  }
  check("AC5", "wilcoxon exactness", [&] { return ac5(five_seeds); });
  check("AC6", "planted-cluster batch profiles", ac6);
  check("AC7", "selection performance", [&] { return ac7(ws); });
  check("AC9", "statistics plumbing", [&] { return ac9(five_seeds); });

  int failures = 0;
  for (const auto& [id, entry] : results) {
    const auto& [title, o] = entry;
    if (!o.pass) ++failures;
    std::printf("%s %s %s: %s\n", o.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(), o.detail.c_str());
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
