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

#ifndef NLGAL_CORPUS_H_
#define NLGAL_CORPUS_H_

// Dataset ingestion and labeled/unlabeled pool bookkeeping.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace nlgal {

using ExampleId = std::string;

// One task instance: an input text and one or more reference outputs.
struct Example {
  ExampleId id;
  std::string input;
  std::vector<std::string> references;
  std::map<std::string, std::string> meta;

  friend bool operator==(const Example&, const Example&) = default;
};

// An ordered list of examples with unique ids. Name is "train" or "test".
class DatasetSplit {
 public:
  DatasetSplit(std::string name, std::vector<Example> examples);

  const std::string& name() const { return name_; }
  const std::vector<Example>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }

  bool contains(std::string_view id) const;
  // Throws nlgal::Error for unknown ids.
  const Example& at(std::string_view id) const;

  std::vector<ExampleId> ids() const;

 private:
  std::string name_;
  std::vector<Example> examples_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Reads one JSON record per line:
//   {"id": str?, "input": str, "references": [str, ...], "meta": {str: str}?}
// Records without an id get "line-NNNNNN" from their zero-based line index.
// Blank lines are skipped. Errors name the one-based line number.
DatasetSplit load_dataset(const std::filesystem::path& path,
                          std::string_view split_name);
DatasetSplit parse_dataset(std::istream& in, std::string_view split_name);

// Serializes a split in the format load_dataset reads.
void write_dataset(const DatasetSplit& split, std::ostream& out);
void write_dataset(const DatasetSplit& split,
                   const std::filesystem::path& path);

// Keeps examples whose score is strictly greater than `threshold`, in order.
DatasetSplit filter_by_score(const DatasetSplit& split,
                             const std::unordered_map<ExampleId, double>& scores,
                             double threshold);

// The disjoint unlabeled (U) and labeled (L) pools of an active learning run.
class PoolState {
 public:
  PoolState(std::shared_ptr<const DatasetSplit> source,
            std::vector<ExampleId> unlabeled,
            std::vector<ExampleId> labeled = {});

  const std::vector<ExampleId>& unlabeled() const { return unlabeled_; }
  const std::vector<ExampleId>& labeled() const { return labeled_; }
  const DatasetSplit& source() const { return *source_; }
  const std::shared_ptr<const DatasetSplit>& source_ptr() const {
    return source_;
  }

  bool is_unlabeled(std::string_view id) const;
  bool is_labeled(std::string_view id) const;
  std::size_t total() const { return unlabeled_.size() + labeled_.size(); }

 private:
  friend PoolState move_to_labeled(const PoolState&, std::span<const ExampleId>);

  std::shared_ptr<const DatasetSplit> source_;
  std::vector<ExampleId> unlabeled_;
  std::vector<ExampleId> labeled_;
  std::unordered_set<ExampleId> unlabeled_set_;
  std::unordered_set<ExampleId> labeled_set_;
};

// Samples min(cap, |train|) ids uniformly without replacement into U using a
// sub-stream derived from `seed`; L starts empty. U keeps file order.
PoolState init_pools(std::shared_ptr<const DatasetSplit> train, std::size_t cap,
                     std::uint64_t seed);

// Moves `ids` from U to the end of L, preserving their order.
PoolState move_to_labeled(const PoolState& pool, std::span<const ExampleId> ids);

}  // namespace nlgal

#endif  // NLGAL_CORPUS_H_
