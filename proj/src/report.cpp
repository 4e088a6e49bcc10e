#include "qteleroute/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace qtr {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

std::string escape_xml(const std::string& s) {
  std::string out;
  out.reserve(s.size());
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

// Chooses a "nice" tick step so axis labels land on round numbers.
double nice_step(double range, int target_ticks) {
  if (range <= 0.0) return 1.0;
  const double raw = range / std::max(target_ticks, 1);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.0) nice = 1.0;
  else if (frac <= 2.0) nice = 2.0;
  else if (frac <= 5.0) nice = 5.0;
  return nice * mag;
}

}  // namespace

std::string render_histogram_svg(const std::string& title,
                                 const std::vector<HistogramBar>& bars,
                                 long long shots) {
  const double width = 900.0, height = 560.0;
  const double ml = 70.0, mr = 30.0, mt = 60.0, mb = 90.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  long long max_count = 1;
  bool any_exact = false;
  for (const auto& b : bars) {
    max_count = std::max(max_count, b.count);
    if (b.exact) {
      any_exact = true;
      if (shots > 0) {
        max_count = std::max(
            max_count, static_cast<long long>(std::ceil(*b.exact * shots)));
      }
    }
  }
  const double y_max = static_cast<double>(max_count) * 1.08;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  svg << "  <text x=\"" << width / 2 << "\" y=\"30\" font-family=\"sans-serif\""
      << " font-size=\"18\" text-anchor=\"middle\">" << escape_xml(title)
      << "</text>\n";

  // Axes.
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"#333333\"/>\n";
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"#333333\"/>\n";

  // Y ticks.
  const double step = nice_step(y_max, 6);
  for (double v = 0.0; v <= y_max + 1e-9; v += step) {
    const double y = mt + plot_h - (v / y_max) * plot_h;
    svg << "  <line x1=\"" << ml - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml
        << "\" y2=\"" << fmt(y) << "\" stroke=\"#333333\"/>\n";
    svg << "  <text x=\"" << ml - 9 << "\" y=\"" << fmt(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\""
        << " text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
  }

  const size_t n = bars.size();
  if (n > 0) {
    const double slot_w = plot_w / static_cast<double>(n);
    const double bar_w = slot_w * 0.7;
    for (size_t i = 0; i < n; ++i) {
      const auto& b = bars[i];
      const double x0 = ml + slot_w * static_cast<double>(i) +
                        (slot_w - bar_w) / 2.0;
      const double h =
          (static_cast<double>(b.count) / y_max) * plot_h;
      const double y0 = mt + plot_h - h;
      svg << "  <rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\""
          << fmt(bar_w) << "\" height=\"" << fmt(h)
          << "\" fill=\"#1f77b4\"/>\n";
      if (b.exact && shots > 0) {
        const double ev = *b.exact * static_cast<double>(shots);
        const double ye = mt + plot_h - (ev / y_max) * plot_h;
        svg << "  <line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(ye)
            << "\" x2=\"" << fmt(x0 + bar_w + 4) << "\" y2=\"" << fmt(ye)
            << "\" stroke=\"#d62728\" stroke-width=\"2.5\"/>\n";
      }
      // Rotated bitstring label under the bar.
      const double lx = x0 + bar_w / 2.0;
      const double ly = mt + plot_h + 14.0;
      svg << "  <text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly)
          << "\" font-family=\"monospace\" font-size=\"11\""
          << " text-anchor=\"end\" transform=\"rotate(-45 " << fmt(lx) << " "
          << fmt(ly) << ")\">" << escape_xml(b.label) << "</text>\n";
    }
  }

  // Legend.
  svg << "  <rect x=\"" << ml + 10 << "\" y=\"" << mt - 18
      << "\" width=\"12\" height=\"12\" fill=\"#1f77b4\"/>\n";
  svg << "  <text x=\"" << ml + 27 << "\" y=\"" << mt - 8
      << "\" font-family=\"sans-serif\" font-size=\"12\">sampled (" << shots
      << " shots)</text>\n";
  if (any_exact) {
    svg << "  <line x1=\"" << ml + 180 << "\" y1=\"" << mt - 12 << "\" x2=\""
        << ml + 204 << "\" y2=\"" << mt - 12
        << "\" stroke=\"#d62728\" stroke-width=\"2.5\"/>\n";
    svg << "  <text x=\"" << ml + 210 << "\" y=\"" << mt - 8
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << "exact expectation</text>\n";
  }

  svg << "</svg>\n";
  return svg.str();
}

std::string render_line_chart_svg(const std::string& title,
                                  const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<LineSeries>& series) {
  const double width = 900.0, height = 560.0;
  const double ml = 80.0, mr = 30.0, mt = 60.0, mb = 70.0;
  const double plot_w = width - ml - mr;
  const double plot_h = height - mt - mb;

  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        x_min = x_max = x;
        y_min = y_max = y;
        first = false;
      } else {
        x_min = std::min(x_min, x);
        x_max = std::max(x_max, x);
        y_min = std::min(y_min, y);
        y_max = std::max(y_max, y);
      }
    }
  }
  if (x_max - x_min < 1e-12) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  // Anchor the y axis at zero when the data is nonnegative, and pad the top.
  if (y_min > 0.0) y_min = 0.0;
  if (y_max - y_min < 1e-12) y_max = y_min + 1.0;
  y_max += (y_max - y_min) * 0.10;

  const auto px = [&](double x) {
    return ml + (x - x_min) / (x_max - x_min) * plot_w;
  };
  const auto py = [&](double y) {
    return mt + plot_h - (y - y_min) / (y_max - y_min) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "  <rect width=\"" << width << "\" height=\"" << height
      << "\" fill=\"#ffffff\"/>\n";
  svg << "  <text x=\"" << width / 2 << "\" y=\"30\" font-family=\"sans-serif\""
      << " font-size=\"18\" text-anchor=\"middle\">" << escape_xml(title)
      << "</text>\n";

  // Axes.
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + plot_h << "\" stroke=\"#333333\"/>\n";
  svg << "  <line x1=\"" << ml << "\" y1=\"" << mt + plot_h << "\" x2=\""
      << ml + plot_w << "\" y2=\"" << mt + plot_h
      << "\" stroke=\"#333333\"/>\n";
  svg << "  <text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 18
      << "\" font-family=\"sans-serif\" font-size=\"13\""
      << " text-anchor=\"middle\">" << escape_xml(x_label) << "</text>\n";
  svg << "  <text x=\"22\" y=\"" << mt + plot_h / 2
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
      << " transform=\"rotate(-90 22 " << mt + plot_h / 2 << ")\">"
      << escape_xml(y_label) << "</text>\n";

  // Ticks with light gridlines.
  const double xs = nice_step(x_max - x_min, 6);
  for (double v = std::ceil(x_min / xs) * xs; v <= x_max + 1e-9; v += xs) {
    const double x = px(v);
    svg << "  <line x1=\"" << fmt(x) << "\" y1=\"" << mt + plot_h << "\" x2=\""
        << fmt(x) << "\" y2=\"" << mt + plot_h + 5
        << "\" stroke=\"#333333\"/>\n";
    svg << "  <text x=\"" << fmt(x) << "\" y=\"" << mt + plot_h + 20
        << "\" font-family=\"sans-serif\" font-size=\"11\""
        << " text-anchor=\"middle\">" << fmt_tick(v) << "</text>\n";
  }
  const double ys = nice_step(y_max - y_min, 6);
  for (double v = std::ceil(y_min / ys) * ys; v <= y_max + 1e-9; v += ys) {
    const double y = py(v);
    svg << "  <line x1=\"" << ml << "\" y1=\"" << fmt(y) << "\" x2=\""
        << ml + plot_w << "\" y2=\"" << fmt(y)
        << "\" stroke=\"#e0e0e0\"/>\n";
    svg << "  <text x=\"" << ml - 9 << "\" y=\"" << fmt(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\""
        << " text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
  }

  // Series: polyline plus point markers.
  for (const auto& s : series) {
    auto pts = s.points;
    std::sort(pts.begin(), pts.end());
    if (!pts.empty()) {
      svg << "  <polyline fill=\"none\" stroke=\"" << s.color
          << "\" stroke-width=\"2.5\" points=\"";
      for (size_t i = 0; i < pts.size(); ++i) {
        if (i > 0) svg << " ";
        svg << fmt(px(pts[i].first)) << "," << fmt(py(pts[i].second));
      }
      svg << "\"/>\n";
    }
    for (const auto& [x, y] : pts) {
      svg << "  <circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
          << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
    }
  }

  // Legend, top-right inside the plot.
  double ly = mt + 14.0;
  for (const auto& s : series) {
    const double lx = ml + plot_w - 180.0;
    svg << "  <line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
        << fmt(lx + 26) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\""
        << s.color << "\" stroke-width=\"2.5\"/>\n";
    svg << "  <circle cx=\"" << fmt(lx + 13) << "\" cy=\"" << fmt(ly - 4)
        << "\" r=\"4\" fill=\"" << s.color << "\"/>\n";
    svg << "  <text x=\"" << fmt(lx + 34) << "\" y=\"" << fmt(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape_xml(s.name) << "</text>\n";
    ly += 18.0;
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace qtr
