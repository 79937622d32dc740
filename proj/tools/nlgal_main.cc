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

// nlgal: run simulated active-learning experiments and analyze their records.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlgal/analysis.h"
#include "nlgal/backend_server.h"
#include "nlgal/config.h"
#include "nlgal/conformance.h"
#include "nlgal/error.h"
#include "nlgal/harness.h"
#include "nlgal/records.h"
#include "nlgal/report.h"
#include "nlgal/synthetic.h"
#include "nlgal/toy_backend.h"

namespace fs = std::filesystem;
using namespace nlgal;

namespace {

constexpr const char* kSnapshotPrefix = "config_";

std::string snapshot_name(const RunConfig& c) {
  std::string name = std::string(kSnapshotPrefix) + c.dataset + "_" + std::string(to_string(c.strategy)) + ".json";
  for (char& ch : name) {
    if (ch == '/' || ch == '\\' || ch == ' ') ch = '_';
  }
  return name;
}

void write_snapshot(const RunConfig& config, const fs::path& out_dir) {
  RunConfig abs = config;
  abs.train_path = fs::absolute(config.train_path);
  abs.test_path = fs::absolute(config.test_path);
  std::ofstream out(out_dir / snapshot_name(config));
  out << to_json(abs).dump(2) << '\n';
}

std::vector<RunConfig> read_snapshots(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto name = e.path().filename().string();
    if (name.rfind(kSnapshotPrefix, 0) == 0 && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunConfig> out;
  for (const auto& f : files) out.push_back(load_config(f));
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

int cmd_run(const fs::path& config_path, const fs::path& out_dir, bool resume) {
  const RunConfig config = load_config(config_path);
  const TaskData data = load_task(config);
  auto backend = make_backend(config.backend);
  check_capabilities(config, backend->capabilities());

  fs::create_directories(out_dir);
  RunOptions options;
  if (resume) {
    for (const auto& key : completed_seeds(out_dir, config.schedule.iterations())) {
      if (key.dataset == config.dataset && key.strategy == to_string(config.strategy)) {
        options.skip_seeds.insert(key.seed);
      }
    }
  }
  write_snapshot(config, out_dir);

  int status = 0;
  PersistOptions persist_opts{true, resume, config.record_wall_time};
  for (std::uint64_t seed : config.seeds) {
    if (options.skip_seeds.count(seed)) {
      std::cerr << "seed " << seed << ": already complete, skipped\n";
      continue;
    }
    const SeedOutcome outcome = run_seed(config, data, *backend, seed);
    if (outcome.complete) {
      persist(outcome.records, out_dir, persist_opts);
      std::cerr << "seed " << seed << ": " << outcome.records.size() << " records, final "
                << config.dataset << " " << to_string(config.metric) << " = "
                << format_double(outcome.records.back().metric_value) << '\n';
    } else {
      persist_partial(outcome.records, out_dir);
      std::cerr << "seed " << seed << ": aborted after " << outcome.records.size()
                << " records: " << outcome.error << '\n';
      status = 2;
    }
  }
  return status;
}

int cmd_analyze(const fs::path& records_dir, const fs::path& out_dir,
                std::vector<std::string> strategy_names, std::vector<std::uint64_t> seeds) {
  const auto configs = read_snapshots(records_dir);
  if (configs.empty()) throw Error("no config snapshots in " + records_dir.string());
  std::vector<StrategyKind> strategies;
  if (strategy_names.empty()) {
    strategies = all_strategies();
  } else {
    for (const auto& s : strategy_names) strategies.push_back(parse_strategy(s));
  }

  // One analysis per dataset, using the first snapshot of that dataset.
  std::map<std::string, RunConfig> by_dataset;
  for (const auto& c : configs) by_dataset.emplace(c.dataset, c);

  fs::create_directories(out_dir);
  auto detail = open_out(out_dir / "batch_profile_detail.csv");
  detail << "dataset,seed,strategy,outlier_score,diversity,batch_size,relative_performance\n";
  std::map<std::string, std::vector<double>> outlier, diversity;
  std::map<std::pair<std::string, std::string>, std::vector<double>> perf;
  for (const auto& [dataset, config] : by_dataset) {
    const TaskData data = load_task(config);
    auto backend = make_backend(config.backend);
    const auto run_seeds = seeds.empty() ? config.seeds : seeds;
    for (std::uint64_t seed : run_seeds) {
      for (const auto& a : analyze_first_iteration(config, data, *backend, strategies, seed)) {
        detail << csv_field(dataset) << ',' << seed << ',' << a.profile.strategy << ','
               << format_double(a.profile.outlier_score) << ',' << format_double(a.profile.diversity)
               << ',' << a.profile.batch_size << ',' << format_double(a.relative_performance) << '\n';
        outlier[a.profile.strategy].push_back(a.profile.outlier_score);
        diversity[a.profile.strategy].push_back(a.profile.diversity);
        perf[{dataset, a.profile.strategy}].push_back(a.relative_performance);
      }
    }
  }
  auto profile = open_out(out_dir / "batch_profile.csv");
  profile << "strategy,outlier_score,diversity\n";
  for (StrategyKind k : strategies) {
    const std::string name(to_string(k));
    profile << name << ',' << format_double(mean(outlier[name])) << ','
            << format_double(mean(diversity[name])) << '\n';
  }
  auto sel = open_out(out_dir / "selection_performance.csv");
  sel << "dataset,strategy,relative_performance,n\n";
  for (const auto& [key, values] : perf) {
    sel << csv_field(key.first) << ',' << key.second << ',' << format_double(mean(values)) << ','
        << values.size() << '\n';
  }
  return 0;
}

Alternative parse_alternative(const std::string& s) {
  if (s == "two-sided") return Alternative::kTwoSided;
  if (s == "greater") return Alternative::kGreater;
  if (s == "less") return Alternative::kLess;
  throw Error("unknown alternative '" + s + "'");
}

int cmd_stats(const fs::path& records_dir, const fs::path& out_dir, const std::string& baseline,
              double alpha, const std::string& alternative, std::size_t family_size) {
  const auto records = read_records(records_dir / kRecordsFile);
  SignificanceOptions opts;
  opts.baseline = baseline;
  opts.alpha = alpha;
  opts.alternative = parse_alternative(alternative);
  if (family_size > 0) opts.family_size = family_size;
  const auto rows = significance_table(records, opts);

  fs::create_directories(out_dir);
  auto sig = open_out(out_dir / "significance.csv");
  sig << "dataset,strategy,p_raw,p_bonferroni,significant\n";
  auto detail = open_out(out_dir / "significance_detail.csv");
  detail << "dataset,strategy,n_pairs,n_nonzero,n_zero,w_plus,w_minus,method\n";
  for (const auto& r : rows) {
    sig << csv_field(r.dataset) << ',' << r.strategy << ',' << format_double(r.p_raw) << ','
        << format_double(r.p_bonferroni) << ',' << (r.significant ? "true" : "false") << '\n';
    detail << csv_field(r.dataset) << ',' << r.strategy << ',' << r.test.n_pairs << ','
           << r.test.n_nonzero << ',' << r.test.n_zero << ',' << format_double(r.test.w_plus) << ','
           << format_double(r.test.w_minus) << ','
           << (r.test.degenerate ? "degenerate" : r.test.exact ? "exact" : "normal") << '\n';
  }

  auto gains = open_out(out_dir / "gains.csv");
  gains << "dataset,strategy,iteration,repetition,relative_gain_pct\n";
  for (const auto& g : relative_gains_table(records, baseline)) {
    gains << csv_field(g.dataset) << ',' << g.strategy << ',' << g.iteration << ',' << g.repetition
          << ',' << (g.relative_gain_pct ? format_double(*g.relative_gain_pct) : "NA") << '\n';
  }
  return 0;
}

int cmd_report(const fs::path& records_dir, const fs::path& out_dir, std::size_t resamples) {
  const auto records = read_records(records_dir / kRecordsFile);
  for (const auto& p : write_report(records, out_dir, resamples)) std::cerr << "wrote " << p.string() << '\n';
  return 0;
}

BackendServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& host, int port, const ToyBackendOptions& toy) {
  ToyBackend backend(toy);
  BackendServer server(backend);
  const int bound = server.bind(host, port);
  std::cout << "listening on http://" << host << ':' << bound << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.serve();
  g_server = nullptr;
  return 0;
}

int cmd_synth(const fs::path& out_dir, const SyntheticTextOptions& opts, std::uint64_t seed) {
  const auto task = synthetic_text_task(opts, seed);
  fs::create_directories(out_dir);
  write_dataset(task.train, out_dir / "train.jsonl");
  write_dataset(task.test, out_dir / "test.jsonl");
  std::cerr << "wrote " << task.train.size() << " train and " << task.test.size()
            << " test examples to " << out_dir.string() << '\n';
  return 0;
}

int cmd_conform(const std::string& url, double timeout) {
  const auto report = conformance_check(url, timeout);
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
    if (!c.passed) std::cout << ": " << c.detail;
    std::cout << '\n';
  }
  std::cout << report.checks.size() - report.failures() << '/' << report.checks.size() << " checks passed\n";
  return report.passed() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pool-based batch active learning simulator for text generation"};
  app.require_subcommand(1);

  fs::path config_path, out_dir, records_dir;
  bool resume = false;
  auto* run = app.add_subcommand("run", "Run every seed of one dataset/strategy config");
  run->add_option("--config", config_path, "JSON run config")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory for records")->required();
  run->add_flag("--resume", resume, "Skip seeds already complete in --out");

  std::vector<std::string> analyze_strategies;
  std::vector<std::uint64_t> analyze_seeds;
  auto* analyze = app.add_subcommand("analyze", "First-batch outlier/diversity/performance analysis");
  analyze->add_option("--records", records_dir, "Records directory (with config snapshots)")
      ->required()->check(CLI::ExistingDirectory);
  analyze->add_option("--out", out_dir, "Output directory")->required();
  analyze->add_option("--strategies", analyze_strategies, "Strategies to profile (default: all)");
  analyze->add_option("--seeds", analyze_seeds, "Seeds (default: the config's seeds)");

  std::string baseline = "random", alternative = "two-sided";
  double alpha = 0.05;
  std::size_t family_size = 0;
  auto* stats = app.add_subcommand("stats", "Wilcoxon/Bonferroni table and relative gains");
  stats->add_option("--records", records_dir, "Records directory")->required()->check(CLI::ExistingDirectory);
  stats->add_option("--out", out_dir, "Output directory")->required();
  stats->add_option("--baseline", baseline, "Baseline strategy")->capture_default_str();
  stats->add_option("--alpha", alpha, "Significance level")->capture_default_str();
  stats->add_option("--alternative", alternative, "two-sided, greater or less")->capture_default_str();
  stats->add_option("--family-size", family_size, "Bonferroni family size (0: strategies per dataset)");

  std::size_t resamples = 10000;
  auto* report = app.add_subcommand("report", "Learning-curve table and SVG charts");
  report->add_option("--records", records_dir, "Records directory")->required()->check(CLI::ExistingDirectory);
  report->add_option("--out", out_dir, "Output directory")->required();
  report->add_option("--resamples", resamples, "Bootstrap resamples")->capture_default_str();

  std::string host = "127.0.0.1";
  int port = 8765;
  ToyBackendOptions toy;
  auto* serve = app.add_subcommand("serve", "Serve the toy backend over the HTTP protocol");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port, "0 picks a free port")->capture_default_str();
  serve->add_option("--p0", toy.p0)->capture_default_str();
  serve->add_option("--scale", toy.scale)->capture_default_str();
  serve->add_option("--difficulty-spread", toy.difficulty_spread)->capture_default_str();

  SyntheticTextOptions synth_opts;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "Write a synthetic train/test task as JSONL");
  synth->add_option("--out", out_dir, "Output directory")->required();
  synth->add_option("--train", synth_opts.train_size)->capture_default_str();
  synth->add_option("--test", synth_opts.test_size)->capture_default_str();
  synth->add_option("--topics", synth_opts.topics)->capture_default_str();
  synth->add_option("--seed", synth_seed)->capture_default_str();

  std::string conform_url;
  double conform_timeout = 60.0;
  auto* conform = app.add_subcommand("conform", "Run the protocol conformance suite against a server");
  conform->add_option("--url", conform_url, "Backend URL, e.g. http://127.0.0.1:8765")->required();
  conform->add_option("--timeout", conform_timeout, "Request timeout in seconds")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_dir, resume);
    if (*analyze) return cmd_analyze(records_dir, out_dir, analyze_strategies, analyze_seeds);
    if (*stats) return cmd_stats(records_dir, out_dir, baseline, alpha, alternative, family_size);
    if (*report) return cmd_report(records_dir, out_dir, resamples);
    if (*serve) return cmd_serve(host, port, toy);
    if (*synth) return cmd_synth(out_dir, synth_opts, synth_seed);
    if (*conform) return cmd_conform(conform_url, conform_timeout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
