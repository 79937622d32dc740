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

#include "nlgal/records.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "nlgal/error.h"

namespace nlgal {
namespace {

std::string join_ids(const std::vector<ExampleId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out.push_back(';');
    out += ids[i];
  }
  return out;
}

std::vector<ExampleId> split_ids(const std::string& s) {
  std::vector<ExampleId> out;
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(';', start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
T parse_number(const std::string& s, const char* what, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("records line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
  return value;
}

double parse_double(const std::string& s, std::size_t line_no) {
  if (s == "nan" || s == "NA") return std::numeric_limits<double>::quiet_NaN();
  std::istringstream in(s);
  in.imbue(std::locale::classic());
  double v;
  in >> v;
  if (in.fail() || !in.eof()) {
    throw ParseError("records line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return v;
}

std::ofstream open_append(const std::filesystem::path& path, const std::string& header) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  if (fresh) out << header << '\n';
  return out;
}

void prepare_dir(const std::filesystem::path& dir, bool create) {
  if (std::filesystem::is_directory(dir)) return;
  if (std::filesystem::exists(dir)) throw Error("not a directory: " + dir.string());
  if (!create) throw Error("output directory does not exist: " + dir.string());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory " + dir.string() + ": " + ec.message());
}

std::set<SeedKey> stored_keys(const std::filesystem::path& path) {
  std::set<SeedKey> keys;
  if (!std::filesystem::exists(path)) return keys;
  for (const auto& r : read_records(path)) keys.insert({r.dataset, r.strategy, r.seed});
  return keys;
}

}  // namespace

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_field(const std::string& value) {
  if (value.find_first_of(",\"\n\r") == std::string::npos) return value;
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

void write_record_row(std::ostream& out, const RunRecord& r, bool with_wall_time) {
  out << csv_field(r.dataset) << ',' << csv_field(r.strategy) << ',' << r.seed << ','
      << r.iteration << ',' << r.labeled_count << ',' << csv_field(r.metric_name) << ','
      << format_double(r.metric_value) << ',' << csv_field(join_ids(r.selected_ids)) << ','
      << format_double(with_wall_time ? r.wall_time_s : 0.0) << '\n';
}

std::vector<RunRecord> read_records(std::istream& in) {
  std::vector<RunRecord> out;
  std::string line;
  if (!std::getline(in, line)) return out;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw ParseError("records: unexpected header '" + line + "'");
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    if (line.empty() || line == "\r") continue;
    auto f = split_csv_line(line);
    if (f.size() != 9) {
      throw ParseError("records line " + std::to_string(line_no) + ": expected 9 fields, got " +
                       std::to_string(f.size()));
    }
    RunRecord r;
    r.dataset = f[0];
    r.strategy = f[1];
    r.seed = parse_number<std::uint64_t>(f[2], "seed", line_no);
    r.iteration = parse_number<std::size_t>(f[3], "iteration", line_no);
    r.labeled_count = parse_number<std::size_t>(f[4], "labeled_count", line_no);
    r.metric_name = f[5];
    r.metric_value = parse_double(f[6], line_no);
    r.selected_ids = split_ids(f[7]);
    r.wall_time_s = parse_double(f[8], line_no);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<RunRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open records file: " + path.string());
  try {
    return read_records(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::size_t persist(std::span<const RunRecord> records, const std::filesystem::path& out_dir,
                    const PersistOptions& options) {
  prepare_dir(out_dir, options.create_dir);
  const auto records_path = out_dir / kRecordsFile;
  const auto existing = stored_keys(records_path);

  std::vector<const RunRecord*> fresh;
  for (const auto& r : records) {
    if (existing.count({r.dataset, r.strategy, r.seed})) {
      if (options.resume) continue;
      throw Error("records for dataset '" + r.dataset + "', strategy '" + r.strategy +
                  "', seed " + std::to_string(r.seed) + " already exist in " +
                  records_path.string() + " (use resume)");
    }
    fresh.push_back(&r);
  }
  if (fresh.empty()) return 0;

  {
    auto out = open_append(records_path, kRecordsHeader);
    for (const RunRecord* r : fresh) write_record_row(out, *r, options.record_wall_time);
    if (!out) throw Error("write failed: " + records_path.string());
  }
  {
    const auto path = out_dir / kTimingsFile;
    auto out = open_append(path, "dataset,strategy,seed,iteration,wall_time_s");
    for (const RunRecord* r : fresh) {
      out << csv_field(r->dataset) << ',' << csv_field(r->strategy) << ',' << r->seed << ','
          << r->iteration << ',' << format_double(r->wall_time_s) << '\n';
    }
    if (!out) throw Error("write failed: " + path.string());
  }
  {
    const auto path = out_dir / kSelectionScoresFile;
    auto out = open_append(path, "dataset,strategy,seed,iteration,id,score");
    for (const RunRecord* r : fresh) {
      if (!r->strategy_scores) continue;
      for (const auto& id : r->selected_ids) {
        auto it = r->strategy_scores->find(id);
        if (it == r->strategy_scores->end()) continue;
        out << csv_field(r->dataset) << ',' << csv_field(r->strategy) << ',' << r->seed << ','
            << r->iteration << ',' << csv_field(id) << ',' << format_double(it->second) << '\n';
      }
    }
    if (!out) throw Error("write failed: " + path.string());
  }
  return fresh.size();
}

void persist_partial(std::span<const RunRecord> records, const std::filesystem::path& out_dir) {
  prepare_dir(out_dir, true);
  const auto path = out_dir / kPartialRecordsFile;
  auto out = open_append(path, kRecordsHeader);
  for (const auto& r : records) write_record_row(out, r, true);
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<SeedKey> completed_seeds(const std::filesystem::path& out_dir,
                                     std::size_t expected_iterations) {
  const auto path = out_dir / kRecordsFile;
  if (!std::filesystem::exists(path)) return {};
  std::map<SeedKey, std::size_t> counts;
  for (const auto& r : read_records(path)) ++counts[{r.dataset, r.strategy, r.seed}];
  std::vector<SeedKey> out;
  for (const auto& [key, n] : counts) {
    if (n == expected_iterations + 1) out.push_back(key);
  }
  return out;
}

}  // namespace nlgal
