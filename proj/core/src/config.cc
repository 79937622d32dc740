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

#include "nlgal/config.h"

#include <fstream>
#include <numeric>
#include <set>

#include "nlgal/error.h"

namespace nlgal {
namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw Error("config: '" + where + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw Error("config: unknown key '" + where + "." + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) {
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      throw Error(std::string("config: key '") + key + "' has the wrong type");
    }
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path.lexically_normal();
}

}  // namespace

std::vector<std::size_t> Schedule::cumulative() const {
  std::vector<std::size_t> out{0};
  for (std::size_t n : batch_sizes) out.push_back(out.back() + n);
  return out;
}

std::size_t Schedule::total() const {
  return std::accumulate(batch_sizes.begin(), batch_sizes.end(), std::size_t{0});
}

void Schedule::validate() const {
  if (batch_sizes.empty()) throw Error("schedule: no batches");
  for (std::size_t n : batch_sizes) {
    if (n == 0) throw Error("schedule: batch sizes must be positive");
  }
}

Schedule default_schedule() {
  Schedule s;
  s.batch_sizes.assign(10, 20);
  s.batch_sizes.insert(s.batch_sizes.end(), 8, 100);
  return s;
}

std::string_view to_string(EvalMode mode) {
  return mode == EvalMode::kCorpus ? "corpus" : "mean_sentence";
}

EvalMode parse_eval_mode(std::string_view name) {
  if (name == "mean_sentence") return EvalMode::kMeanSentence;
  if (name == "corpus") return EvalMode::kCorpus;
  throw Error("unknown eval_mode '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (dataset.empty()) throw Error("config: dataset name is empty");
  if (train_path.empty() || test_path.empty()) throw Error("config: dataset train/test paths required");
  metric_config.validate();
  strategy_params.validate();
  schedule.validate();
  if (pool_cap == 0) throw Error("config: pool_cap must be >= 1");
  if (repetitions == 0) throw Error("config: repetitions must be >= 1");
  if (seeds.size() != repetitions) {
    throw Error("config: expected " + std::to_string(repetitions) + " seeds, got " +
                std::to_string(seeds.size()));
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw Error("config: seeds must be distinct");
  }
  if (backend.type == BackendConfig::Type::kRemote && backend.url.empty()) {
    throw Error("config: remote backend needs a url");
  }
  if (prompt_template && prompt_template->find("{input}") == std::string::npos) {
    throw Error("config: prompt_template must contain {input}");
  }
  if (analysis_batch_size == 0) throw Error("config: analysis_batch_size must be >= 1");
  if (finetune.epochs < 1 || finetune.train_batch_size < 1 || !(finetune.learning_rate > 0.0)) {
    throw Error("config: invalid finetune settings");
  }
}

RunConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  check_keys(j, "config",
             {"dataset", "metric", "strategy", "strategy_params", "schedule", "pool_cap",
              "repetitions", "seeds", "backend", "finetune", "eval_mode", "prompt_template",
              "test_size", "test_seed", "analysis_batch_size", "record_wall_time"});
  RunConfig c;

  const json& ds = j.at("dataset");
  check_keys(ds, "dataset", {"name", "train", "test"});
  std::string train, test;
  read(ds, "train", train);
  read(ds, "test", test);
  if (train.empty() || test.empty()) throw Error("config: dataset.train and dataset.test are required");
  c.train_path = resolve(base_dir, train);
  c.test_path = resolve(base_dir, test);
  c.dataset = c.train_path.stem().string();
  read(ds, "name", c.dataset);

  if (auto it = j.find("metric"); it != j.end()) {
    check_keys(*it, "metric", {"kind", "ibleu_alpha", "bleu_max_order", "variance_bleu_order"});
    std::string kind = std::string(to_string(c.metric));
    read(*it, "kind", kind);
    c.metric = parse_metric_kind(kind);
    read(*it, "ibleu_alpha", c.metric_config.ibleu_alpha);
    read(*it, "bleu_max_order", c.metric_config.bleu_max_order);
    read(*it, "variance_bleu_order", c.metric_config.variance_bleu_order);
  }
  c.strategy_params.variance_bleu_order = c.metric_config.variance_bleu_order;

  if (auto it = j.find("strategy"); it != j.end()) c.strategy = parse_strategy(it->get<std::string>());
  if (auto it = j.find("strategy_params"); it != j.end()) {
    check_keys(*it, "strategy_params", {"idds_lambda", "mc_samples", "knn_k"});
    read(*it, "idds_lambda", c.strategy_params.idds_lambda);
    read(*it, "mc_samples", c.strategy_params.mc_samples);
    read(*it, "knn_k", c.strategy_params.knn_k);
  }
  if (auto it = j.find("schedule"); it != j.end()) {
    check_keys(*it, "schedule", {"batch_sizes"});
    read(*it, "batch_sizes", c.schedule.batch_sizes);
  }
  read(j, "pool_cap", c.pool_cap);
  read(j, "repetitions", c.repetitions);
  if (j.contains("seeds")) {
    read(j, "seeds", c.seeds);
  } else {
    c.seeds.resize(c.repetitions);
    std::iota(c.seeds.begin(), c.seeds.end(), std::uint64_t{0});
  }

  if (auto it = j.find("backend"); it != j.end()) {
    check_keys(*it, "backend", {"type", "url", "timeout_s", "p0", "scale", "difficulty_spread"});
    std::string type = "toy";
    read(*it, "type", type);
    if (type == "toy") {
      c.backend.type = BackendConfig::Type::kToy;
    } else if (type == "remote") {
      c.backend.type = BackendConfig::Type::kRemote;
    } else {
      throw Error("config: backend.type must be 'toy' or 'remote'");
    }
    read(*it, "url", c.backend.url);
    read(*it, "timeout_s", c.backend.timeout_s);
    read(*it, "p0", c.backend.toy.p0);
    read(*it, "scale", c.backend.toy.scale);
    read(*it, "difficulty_spread", c.backend.toy.difficulty_spread);
  }
  if (auto it = j.find("finetune"); it != j.end()) {
    check_keys(*it, "finetune", {"epochs", "learning_rate", "train_batch_size"});
    read(*it, "epochs", c.finetune.epochs);
    read(*it, "learning_rate", c.finetune.learning_rate);
    read(*it, "train_batch_size", c.finetune.train_batch_size);
  }
  if (auto it = j.find("eval_mode"); it != j.end()) c.eval_mode = parse_eval_mode(it->get<std::string>());
  if (auto it = j.find("prompt_template"); it != j.end() && !it->is_null()) {
    c.prompt_template = it->get<std::string>();
  }
  read(j, "test_size", c.test_size);
  read(j, "test_seed", c.test_seed);
  read(j, "analysis_batch_size", c.analysis_batch_size);
  read(j, "record_wall_time", c.record_wall_time);
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return config_from_json(j, path.parent_path());
  } catch (const json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

json to_json(const RunConfig& c) {
  json backend = {{"type", c.backend.type == BackendConfig::Type::kToy ? "toy" : "remote"}};
  if (c.backend.type == BackendConfig::Type::kRemote) {
    backend["url"] = c.backend.url;
    backend["timeout_s"] = c.backend.timeout_s;
  } else {
    backend["p0"] = c.backend.toy.p0;
    backend["scale"] = c.backend.toy.scale;
    backend["difficulty_spread"] = c.backend.toy.difficulty_spread;
  }
  return {
      {"dataset", {{"name", c.dataset}, {"train", c.train_path.string()}, {"test", c.test_path.string()}}},
      {"metric",
       {{"kind", std::string(to_string(c.metric))},
        {"ibleu_alpha", c.metric_config.ibleu_alpha},
        {"bleu_max_order", c.metric_config.bleu_max_order},
        {"variance_bleu_order", c.metric_config.variance_bleu_order}}},
      {"strategy", std::string(to_string(c.strategy))},
      {"strategy_params",
       {{"idds_lambda", c.strategy_params.idds_lambda},
        {"mc_samples", c.strategy_params.mc_samples},
        {"knn_k", c.strategy_params.knn_k}}},
      {"schedule", {{"batch_sizes", c.schedule.batch_sizes}}},
      {"pool_cap", c.pool_cap},
      {"repetitions", c.repetitions},
      {"seeds", c.seeds},
      {"backend", backend},
      {"finetune",
       {{"epochs", c.finetune.epochs},
        {"learning_rate", c.finetune.learning_rate},
        {"train_batch_size", c.finetune.train_batch_size}}},
      {"eval_mode", std::string(to_string(c.eval_mode))},
      {"prompt_template", c.prompt_template ? json(*c.prompt_template) : json(nullptr)},
      {"test_size", c.test_size},
      {"test_seed", c.test_seed},
      {"analysis_batch_size", c.analysis_batch_size},
      {"record_wall_time", c.record_wall_time},
  };
}

}  // namespace nlgal
