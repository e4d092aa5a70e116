// Copyright 2026 The Vocagno Authors.
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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "vocagno/error.hpp"
#include "vocagno/workflows.hpp"

namespace vocagno {

namespace {

struct Aggregate {
  size_t docs = 0;
  double iou = 0.0;
  double ios = 0.0;
};

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, a);
  return buf;
}

double parse_number(const std::string& s, size_t line) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::kMalformedLine, "metrics CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

}  // namespace

void render_report(const std::string& metrics_csv, const std::string& svg_out,
                   const std::string& table_out) {
  std::ifstream in(metrics_csv);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + metrics_csv + "'");
  std::map<size_t, Aggregate> by_chunks;
  Aggregate token_level;
  std::string line;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (n == 1 && line.rfind("doc_id,", 0) == 0)) continue;
    // doc ids may contain commas, so split off the last three fields.
    const size_t c3 = line.rfind(',');
    const size_t c2 = c3 == std::string::npos ? c3 : line.rfind(',', c3 - 1);
    const size_t c1 = c2 == std::string::npos || c2 == 0 ? std::string::npos : line.rfind(',', c2 - 1);
    if (c1 == std::string::npos) {
      fail(ErrorCode::kMalformedLine, "metrics CSV line " + std::to_string(n) + ": expected 4 fields");
    }
    const std::string label = line.substr(c1 + 1, c2 - c1 - 1);
    const double iou = parse_number(line.substr(c2 + 1, c3 - c2 - 1), n);
    const double ios = parse_number(line.substr(c3 + 1), n);
    Aggregate* agg;
    if (label == "tokenlevel") {
      agg = &token_level;
    } else {
      const double chunks = parse_number(label, n);
      if (chunks < 1 || chunks != std::floor(chunks)) {
        fail(ErrorCode::kMalformedLine, "metrics CSV line " + std::to_string(n) + ": bad num_chunks");
      }
      agg = &by_chunks[static_cast<size_t>(chunks)];
    }
    ++agg->docs;
    agg->iou += iou;
    agg->ios += ios;
  }
  auto finalize = [](Aggregate& a) {
    if (a.docs > 0) {
      a.iou /= static_cast<double>(a.docs);
      a.ios /= static_cast<double>(a.docs);
    }
  };
  for (auto& [c, a] : by_chunks) finalize(a);
  finalize(token_level);

  std::ostringstream table;
  table << "num_chunks    docs  mean_iou  mean_ios\n";
  char buf[128];
  for (const auto& [c, a] : by_chunks) {
    std::snprintf(buf, sizeof(buf), "%-12zu %5zu  %8.6f  %8.6f\n", c, a.docs, a.iou, a.ios);
    table << buf;
  }
  if (token_level.docs > 0) {
    std::snprintf(buf, sizeof(buf), "%-12s %5zu  %8.6f  %8.6f\n", "tokenlevel", token_level.docs,
                  token_level.iou, token_level.ios);
    table << buf;
  }
  {
    std::ofstream out(table_out, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::kIo, "cannot open '" + table_out + "' for writing");
    out << table.str();
    if (!out) fail(ErrorCode::kIo, "write failure on '" + table_out + "'");
  }

  // Chart: x = log2(num_chunks), y = overlap in [0, 1].
  constexpr double kW = 640, kH = 400, kLeft = 60, kRight = 150, kTop = 30, kBottom = 50;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;
  double xmin = 0, xmax = 1;
  if (!by_chunks.empty()) {
    xmin = std::log2(static_cast<double>(by_chunks.begin()->first));
    xmax = std::log2(static_cast<double>(by_chunks.rbegin()->first));
    if (xmax - xmin < 1e-9) {
      xmin -= 0.5;
      xmax += 0.5;
    }
  }
  auto px = [&](size_t chunks) {
    return kLeft + (std::log2(static_cast<double>(chunks)) - xmin) / (xmax - xmin) * plot_w;
  };
  auto py = [&](double v) { return kTop + (1.0 - v) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kLeft << "\" y=\"18\">Sequence overlap by granularity</text>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << py(0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << py(0) << "\" x2=\"" << kLeft << "\" y2=\""
      << py(1) << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double v = t / 4.0;
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt("%.2f", py(v) + 4)
        << "\" text-anchor=\"end\">" << fmt("%.2f", v) << "</text>\n";
  }
  for (const auto& [c, a] : by_chunks) {
    svg << "<text x=\"" << fmt("%.2f", px(c)) << "\" y=\"" << py(0) + 18
        << "\" text-anchor=\"middle\">" << c << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">number of chunks</text>\n";

  struct Series {
    const char* name;
    const char* color;
    double Aggregate::*field;
  };
  const Series series[] = {{"IoU", "#1f77b4", &Aggregate::iou}, {"IoS", "#ff7f0e", &Aggregate::ios}};
  double legend_y = kTop + 10;
  for (const Series& s : series) {
    if (!by_chunks.empty()) {
      svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
      bool first = true;
      for (const auto& [c, a] : by_chunks) {
        svg << (first ? "" : " ") << fmt("%.2f", px(c)) << "," << fmt("%.2f", py(a.*s.field));
        first = false;
      }
      svg << "\"/>\n";
      for (const auto& [c, a] : by_chunks) {
        svg << "<circle cx=\"" << fmt("%.2f", px(c)) << "\" cy=\"" << fmt("%.2f", py(a.*s.field))
            << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
      }
    }
    svg << "<text x=\"" << kLeft + plot_w + 12 << "\" y=\"" << legend_y << "\" fill=\"" << s.color
        << "\">chunk " << s.name << "</text>\n";
    legend_y += 18;
    if (token_level.docs > 0) {
      const double y = py(token_level.*s.field);
      svg << "<line x1=\"" << kLeft << "\" y1=\"" << fmt("%.2f", y) << "\" x2=\"" << kLeft + plot_w
          << "\" y2=\"" << fmt("%.2f", y) << "\" stroke=\"" << s.color
          << "\" stroke-dasharray=\"6,4\"/>\n";
      svg << "<text x=\"" << kLeft + plot_w + 12 << "\" y=\"" << legend_y << "\" fill=\"" << s.color
          << "\">token-level " << s.name << "</text>\n";
      legend_y += 18;
    }
  }
  svg << "</svg>\n";
  std::ofstream out(svg_out, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + svg_out + "' for writing");
  out << svg.str();
  if (!out) fail(ErrorCode::kIo, "write failure on '" + svg_out + "'");
}

}  // namespace vocagno
