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

#include "nlgal/corpus.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "nlgal/error.h"
#include "nlgal/rng.h"

namespace nlgal {
namespace {

using nlohmann::json;

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
           c == '\v';
  });
}

std::string line_error(std::size_t line_no, std::string_view msg) {
  return "line " + std::to_string(line_no) + ": " + std::string(msg);
}

std::string auto_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "line-%06zu", index);
  return buf;
}

Example parse_record(const std::string& line, std::size_t index) {
  const std::size_t line_no = index + 1;
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(line_error(line_no, std::string("malformed record: ") + e.what()));
  }
  if (!record.is_object()) {
    throw ParseError(line_error(line_no, "malformed record: expected an object"));
  }

  Example ex;
  if (auto it = record.find("id"); it != record.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line_error(line_no, "id must be a string"));
    ex.id = it->get<std::string>();
    if (ex.id.empty()) throw ParseError(line_error(line_no, "empty id"));
  } else {
    ex.id = auto_id(index);
  }

  auto input = record.find("input");
  if (input == record.end()) throw ParseError(line_error(line_no, "missing input"));
  if (!input->is_string()) throw ParseError(line_error(line_no, "input must be a string"));
  ex.input = input->get<std::string>();
  if (is_blank(ex.input)) throw ParseError(line_error(line_no, "empty input"));

  auto refs = record.find("references");
  if (refs == record.end()) throw ParseError(line_error(line_no, "missing references"));
  if (!refs->is_array()) throw ParseError(line_error(line_no, "references must be an array"));
  if (refs->empty()) throw ParseError(line_error(line_no, "empty references"));
  for (const auto& r : *refs) {
    if (!r.is_string()) throw ParseError(line_error(line_no, "references must be strings"));
    auto text = r.get<std::string>();
    if (is_blank(text)) throw ParseError(line_error(line_no, "empty reference"));
    ex.references.push_back(std::move(text));
  }

  if (auto meta = record.find("meta"); meta != record.end() && !meta->is_null()) {
    if (!meta->is_object()) throw ParseError(line_error(line_no, "meta must be an object"));
    for (const auto& [key, value] : meta->items()) {
      if (!value.is_string()) {
        throw ParseError(line_error(line_no, "meta values must be strings"));
      }
      ex.meta.emplace(key, value.get<std::string>());
    }
  }
  return ex;
}

}  // namespace

DatasetSplit::DatasetSplit(std::string name, std::vector<Example> examples)
    : name_(std::move(name)), examples_(std::move(examples)) {
  if (name_ != "train" && name_ != "test") {
    throw Error("split name must be 'train' or 'test', got '" + name_ + "'");
  }
  index_.reserve(examples_.size());
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    if (!index_.emplace(examples_[i].id, i).second) {
      throw Error("duplicate id '" + examples_[i].id + "' in split " + name_);
    }
  }
}

bool DatasetSplit::contains(std::string_view id) const {
  return index_.find(std::string(id)) != index_.end();
}

const Example& DatasetSplit::at(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) {
    throw Error("unknown example id '" + std::string(id) + "' in split " + name_);
  }
  return examples_[it->second];
}

std::vector<ExampleId> DatasetSplit::ids() const {
  std::vector<ExampleId> out;
  out.reserve(examples_.size());
  for (const auto& ex : examples_) out.push_back(ex.id);
  return out;
}

DatasetSplit parse_dataset(std::istream& in, std::string_view split_name) {
  std::vector<Example> examples;
  std::unordered_set<std::string> seen;
  std::string line;
  for (std::size_t index = 0; std::getline(in, line); ++index) {
    if (is_blank(line)) continue;
    Example ex = parse_record(line, index);
    if (!seen.insert(ex.id).second) {
      throw ParseError(line_error(index + 1, "duplicate id '" + ex.id + "'"));
    }
    examples.push_back(std::move(ex));
  }
  return DatasetSplit(std::string(split_name), std::move(examples));
}

DatasetSplit load_dataset(const std::filesystem::path& path,
                          std::string_view split_name) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset file: " + path.string());
  try {
    return parse_dataset(in, split_name);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_dataset(const DatasetSplit& split, std::ostream& out) {
  for (const auto& ex : split.examples()) {
    json record = {{"id", ex.id}, {"input", ex.input}, {"references", ex.references}};
    if (!ex.meta.empty()) record["meta"] = ex.meta;
    out << record.dump() << '\n';
  }
}

void write_dataset(const DatasetSplit& split, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write dataset file: " + path.string());
  write_dataset(split, out);
  if (!out) throw Error("write failed: " + path.string());
}

DatasetSplit filter_by_score(const DatasetSplit& split,
                             const std::unordered_map<ExampleId, double>& scores,
                             double threshold) {
  std::vector<Example> kept;
  for (const auto& ex : split.examples()) {
    auto it = scores.find(ex.id);
    if (it == scores.end()) throw Error("missing score for id '" + ex.id + "'");
    if (it->second > threshold) kept.push_back(ex);
  }
  return DatasetSplit(split.name(), std::move(kept));
}

PoolState::PoolState(std::shared_ptr<const DatasetSplit> source,
                     std::vector<ExampleId> unlabeled,
                     std::vector<ExampleId> labeled)
    : source_(std::move(source)),
      unlabeled_(std::move(unlabeled)),
      labeled_(std::move(labeled)) {
  if (!source_) throw Error("PoolState requires a source split");
  for (const auto& id : unlabeled_) {
    if (!source_->contains(id)) throw Error("pool id '" + id + "' not in source split");
    if (!unlabeled_set_.insert(id).second) throw Error("duplicate unlabeled id '" + id + "'");
  }
  for (const auto& id : labeled_) {
    if (!source_->contains(id)) throw Error("pool id '" + id + "' not in source split");
    if (unlabeled_set_.count(id) || !labeled_set_.insert(id).second) {
      throw Error("id '" + id + "' is not disjoint across pools");
    }
  }
}

bool PoolState::is_unlabeled(std::string_view id) const {
  return unlabeled_set_.count(std::string(id)) > 0;
}

bool PoolState::is_labeled(std::string_view id) const {
  return labeled_set_.count(std::string(id)) > 0;
}

PoolState init_pools(std::shared_ptr<const DatasetSplit> train, std::size_t cap,
                     std::uint64_t seed) {
  if (!train || train->empty()) throw Error("init_pools: empty train split");
  if (cap == 0) throw Error("init_pools: cap must be >= 1");
  const auto& examples = train->examples();
  std::vector<ExampleId> unlabeled;
  if (cap >= examples.size()) {
    unlabeled = train->ids();
  } else {
    Rng rng(derive_seed(seed, "pool-sampling"));
    auto picked = sample_without_replacement(examples.size(), cap, rng);
    std::sort(picked.begin(), picked.end());
    unlabeled.reserve(cap);
    for (std::size_t i : picked) unlabeled.push_back(examples[i].id);
  }
  return PoolState(std::move(train), std::move(unlabeled));
}

PoolState move_to_labeled(const PoolState& pool, std::span<const ExampleId> ids) {
  PoolState next = pool;
  if (ids.empty()) return next;
  std::unordered_set<ExampleId> moving;
  for (const auto& id : ids) {
    if (!next.unlabeled_set_.count(id) || moving.count(id)) {
      throw Error("cannot label '" + id + "': not in the unlabeled pool");
    }
    moving.insert(id);
  }
  std::erase_if(next.unlabeled_, [&](const ExampleId& id) { return moving.count(id) > 0; });
  for (const auto& id : ids) {
    next.unlabeled_set_.erase(id);
    next.labeled_set_.insert(id);
    next.labeled_.push_back(id);
  }
  return next;
}

}  // namespace nlgal
