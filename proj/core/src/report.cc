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

#include "nlgal/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nlgal/error.h"

namespace nlgal {
namespace {

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string safe_file_component(const std::string& s) {
  std::string out;
  for (char c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(ok ? c : '_');
  }
  return out.empty() ? "dataset" : out;
}

}  // namespace

void write_curves_csv(std::span<const CurvePoint> points, std::ostream& out) {
  out << kCurvesHeader << '\n';
  for (const auto& p : points) {
    out << csv_field(p.dataset) << ',' << csv_field(p.strategy) << ',' << p.iteration << ','
        << p.labeled_count << ',' << format_double(p.mean) << ',' << format_double(p.ci_low) << ','
        << format_double(p.ci_high) << ',' << p.n << '\n';
  }
}

std::string render_curves_svg(std::span<const CurvePoint> points, const std::string& dataset) {
  constexpr double kWidth = 640, kHeight = 400;
  constexpr double kLeft = 60, kRight = 140, kTop = 30, kBottom = 50;
  std::map<std::string, std::vector<const CurvePoint*>> by_strategy;
  double x_max = 0, y_min = INFINITY, y_max = -INFINITY;
  for (const auto& p : points) {
    if (p.dataset != dataset) continue;
    by_strategy[p.strategy].push_back(&p);
    x_max = std::max(x_max, static_cast<double>(p.labeled_count));
    y_min = std::min(y_min, p.ci_low);
    y_max = std::max(y_max, p.ci_high);
  }
  if (by_strategy.empty()) throw Error("no curve points for dataset '" + dataset + "'");
  if (x_max <= 0) x_max = 1;
  if (!(y_max > y_min)) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + plot_w * x / x_max; };
  auto sy = [&](double y) { return kTop + plot_h * (1.0 - (y - y_min) / (y_max - y_min)); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"18\" font-size=\"14\">" << escape_xml(dataset)
      << "</text>\n";
  // axes
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << kTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x_max * t / 4.0, yv = y_min + (y_max - y_min) * t / 4.0;
    svg << "<text x=\"" << fmt(sx(xv)) << "\" y=\"" << fmt(kTop + plot_h + 16)
        << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
    svg << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(sy(yv) + 4)
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\">labeled examples</text>\n";

  std::size_t color = 0;
  for (auto& [strategy, pts] : by_strategy) {
    std::sort(pts.begin(), pts.end(),
              [](const CurvePoint* a, const CurvePoint* b) { return a->labeled_count < b->labeled_count; });
    const char* c = kPalette[color++ % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::string band, line;
    for (const auto* p : pts) band += fmt(sx(p->labeled_count)) + "," + fmt(sy(p->ci_high)) + " ";
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
      band += fmt(sx((*it)->labeled_count)) + "," + fmt(sy((*it)->ci_low)) + " ";
    }
    for (const auto* p : pts) line += fmt(sx(p->labeled_count)) + "," + fmt(sy(p->mean)) + " ";
    svg << "<polygon points=\"" << band << "\" fill=\"" << c << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    svg << "<polyline points=\"" << line << "\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(color);
    svg << "<line x1=\"" << fmt(kLeft + plot_w + 10) << "\" y1=\"" << fmt(ly) << "\" x2=\""
        << fmt(kLeft + plot_w + 30) << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt(kLeft + plot_w + 34) << "\" y=\"" << fmt(ly + 4) << "\">"
        << escape_xml(strategy) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::vector<std::filesystem::path> write_report(std::span<const RunRecord> records,
                                                const std::filesystem::path& out_dir,
                                                std::size_t resamples, std::uint64_t seed) {
  if (records.empty()) throw Error("report: no records");
  std::filesystem::create_directories(out_dir);
  const auto points = learning_curves(records, resamples, seed);
  std::vector<std::filesystem::path> written;
  const auto csv_path = out_dir / "learning_curves.csv";
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw Error("cannot write " + csv_path.string());
    write_curves_csv(points, out);
  }
  written.push_back(csv_path);
  std::set<std::string> datasets;
  for (const auto& p : points) datasets.insert(p.dataset);
  for (const auto& d : datasets) {
    const auto path = out_dir / ("curves_" + safe_file_component(d) + ".svg");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << render_curves_svg(points, d);
    written.push_back(path);
  }
  return written;
}

}  // namespace nlgal
