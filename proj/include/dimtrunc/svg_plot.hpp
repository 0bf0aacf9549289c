#pragma once

// Self-contained log-log SVG plots of truncation-error tables.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "dimtrunc/error.hpp"
#include "dimtrunc/error_table.hpp"

namespace dimtrunc {

namespace detail {

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

inline const char* series_color(std::size_t i) {
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                 "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  return colors[i % (sizeof colors / sizeof *colors)];
}

inline std::string legend_label(const ErrorTable& t, std::size_t index) {
  std::string label;
  if (auto th = t.meta("theta")) label = "ϑ = " + *th;
  else label = "table " + std::to_string(index + 1);
  if (auto q = t.meta("quantity")) label += " (" + *q + ")";
  return label;
}

}  // namespace detail

/// One polyline with markers per table and, when the table records its
/// expected rate, a dashed reference line of that slope through the last
/// data point.
inline std::string render_svg(const std::vector<ErrorTable>& tables,
                              const std::string& title = "dimension truncation error") {
  if (tables.empty()) throw ConfigError("plot needs at least one table");
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& t : tables) {
    std::size_t usable = 0;
    for (const auto& r : t.rows) {
      if (r.error <= 0.0 || r.s == 0) continue;
      ++usable;
      xmin = std::min(xmin, std::log10(static_cast<double>(r.s)));
      xmax = std::max(xmax, std::log10(static_cast<double>(r.s)));
      ymin = std::min(ymin, std::log10(r.error));
      ymax = std::max(ymax, std::log10(r.error));
    }
    if (usable == 0) throw ConfigError("plot table has no positive errors");
  }
  if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
  xmin = std::floor(xmin);
  xmax = std::ceil(xmax);
  ymin = std::floor(ymin);
  ymax = std::ceil(ymax);

  const double width = 720, height = 520, left = 80, right = 220, top = 40, bottom = 60;
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double lx) { return left + (lx - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double ly) { return top + (ymax - ly) / (ymax - ymin) * ph; };

  std::ostringstream svg;
  svg.precision(6);
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\" font-family=\"sans-serif\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << detail::xml_escape(title) << "</text>\n"
      << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\"/>\n</g>\n<g class=\"ticks\" font-size=\"12\">\n";
  for (double e = xmin; e <= xmax + 1e-9; e += 1.0)
    svg << "<line x1=\"" << px(e) << "\" y1=\"" << top + ph << "\" x2=\"" << px(e) << "\" y2=\""
        << top + ph + 6 << "\" stroke=\"black\"/><text x=\"" << px(e) << "\" y=\""
        << top + ph + 22 << "\" text-anchor=\"middle\">1e" << static_cast<int>(e) << "</text>\n";
  for (double e = ymin; e <= ymax + 1e-9; e += 1.0)
    svg << "<line x1=\"" << left - 6 << "\" y1=\"" << py(e) << "\" x2=\"" << left << "\" y2=\""
        << py(e) << "\" stroke=\"black\"/><text x=\"" << left - 10 << "\" y=\"" << py(e) + 4
        << "\" text-anchor=\"end\">1e" << static_cast<int>(e) << "</text>\n";
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 14
      << "\" text-anchor=\"middle\">s</text>\n"
      << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << top + ph / 2 << ")\">error</text>\n</g>\n";

  svg << "<defs><clipPath id=\"plot-area\"><rect x=\"" << left << "\" y=\"" << top
      << "\" width=\"" << pw << "\" height=\"" << ph << "\"/></clipPath></defs>\n";
  for (std::size_t i = 0; i < tables.size(); ++i) {
    const auto& t = tables[i];
    const char* color = detail::series_color(i);
    svg << "<g class=\"series\">\n<polyline class=\"data\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    const ErrorRow* last = nullptr;
    const ErrorRow* first = nullptr;
    for (const auto& r : t.rows) {
      if (r.error <= 0.0 || r.s == 0) continue;
      if (!first) first = &r;
      last = &r;
      svg << px(std::log10(static_cast<double>(r.s))) << "," << py(std::log10(r.error)) << " ";
    }
    svg << "\"/>\n";
    for (const auto& r : t.rows) {
      if (r.error <= 0.0 || r.s == 0) continue;
      svg << "<circle class=\"marker\" cx=\"" << px(std::log10(static_cast<double>(r.s)))
          << "\" cy=\"" << py(std::log10(r.error)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    if (auto rate = t.meta_number("expected_rate"); rate && last) {
      const double lx1 = std::log10(static_cast<double>(last->s));
      const double ly1 = std::log10(last->error);
      const double lx0 = std::log10(static_cast<double>(first->s));
      const double ly0 = ly1 + *rate * (lx0 - lx1);
      svg << "<line class=\"reference\" clip-path=\"url(#plot-area)\" x1=\"" << px(lx0)
          << "\" y1=\"" << py(ly0) << "\" x2=\"" << px(lx1) << "\" y2=\"" << py(ly1)
          << "\" stroke=\"" << color << "\" stroke-dasharray=\"6,4\"/>\n";
    }
    svg << "</g>\n";
    const double ly = top + 16 + 22.0 * static_cast<double>(i);
    svg << "<g class=\"legend\"><line x1=\"" << left + pw + 14 << "\" y1=\"" << ly - 4
        << "\" x2=\"" << left + pw + 38 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/><text class=\"legend-entry\" x=\"" << left + pw + 44
        << "\" y=\"" << ly << "\" font-size=\"12\">"
        << detail::xml_escape(detail::legend_label(t, i)) << "</text></g>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace dimtrunc
