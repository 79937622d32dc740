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

#ifndef NLGAL_REPORT_H_
#define NLGAL_REPORT_H_

// Learning-curve tables and a minimal SVG line chart per dataset.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "nlgal/analysis.h"
#include "nlgal/records.h"

namespace nlgal {

inline constexpr const char* kCurvesHeader =
    "dataset,strategy,iteration,labeled_count,mean,ci_low,ci_high,n";

void write_curves_csv(std::span<const CurvePoint> points, std::ostream& out);

// Mean curve per strategy against labeled count, with a shaded CI band.
std::string render_curves_svg(std::span<const CurvePoint> points, const std::string& dataset);

// learning_curves.csv plus curves_<dataset>.svg; returns the written paths.
std::vector<std::filesystem::path> write_report(std::span<const RunRecord> records,
                                                const std::filesystem::path& out_dir,
                                                std::size_t resamples = 10000,
                                                std::uint64_t seed = 0);

}  // namespace nlgal

#endif  // NLGAL_REPORT_H_
