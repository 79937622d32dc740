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

#ifndef NLGAL_RECORDS_H_
#define NLGAL_RECORDS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlgal/corpus.h"

namespace nlgal {

// One (dataset, strategy, seed, iteration) observation. Iteration 0 is the
// zero-shot evaluation of the base model.
struct RunRecord {
  std::string dataset;
  std::string strategy;
  std::uint64_t seed = 0;
  std::size_t iteration = 0;
  std::size_t labeled_count = 0;
  std::vector<ExampleId> selected_ids;
  std::string metric_name;
  double metric_value = 0.0;
  std::optional<std::unordered_map<ExampleId, double>> strategy_scores;
  double wall_time_s = 0.0;
};

inline constexpr const char* kRecordsHeader =
    "dataset,strategy,seed,iteration,labeled_count,metric_name,metric_value,"
    "selected_ids,wall_time_s";

inline constexpr const char* kRecordsFile = "records.csv";
inline constexpr const char* kPartialRecordsFile = "partial_records.csv";
inline constexpr const char* kTimingsFile = "timings.csv";
inline constexpr const char* kSelectionScoresFile = "selection_scores.csv";

// Splits one CSV line (RFC 4180 quoting) into fields.
std::vector<std::string> split_csv_line(const std::string& line);
// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(const std::string& value);
// Shortest decimal form that round-trips the double exactly.
std::string format_double(double value);

void write_record_row(std::ostream& out, const RunRecord& r, bool with_wall_time);
std::vector<RunRecord> read_records(std::istream& in);
std::vector<RunRecord> read_records(const std::filesystem::path& path);

struct PersistOptions {
  bool create_dir = false;
  // Skip (dataset, strategy, seed) groups already present instead of failing.
  bool resume = false;
  bool record_wall_time = false;
};

struct SeedKey {
  std::string dataset;
  std::string strategy;
  std::uint64_t seed = 0;
  friend auto operator<=>(const SeedKey&, const SeedKey&) = default;
};

// Appends records to <out_dir>/records.csv (writing the header once), plus
// timings.csv and selection_scores.csv. Returns the number of rows written.
std::size_t persist(std::span<const RunRecord> records, const std::filesystem::path& out_dir,
                    const PersistOptions& options = {});

// Appends records of an aborted seed to partial_records.csv.
void persist_partial(std::span<const RunRecord> records, const std::filesystem::path& out_dir);

// Seeds already stored in <out_dir>/records.csv with exactly
// `expected_iterations` + 1 rows.
std::vector<SeedKey> completed_seeds(const std::filesystem::path& out_dir,
                                     std::size_t expected_iterations);

}  // namespace nlgal

#endif  // NLGAL_RECORDS_H_
