#pragma once

// Self-contained SVG chart rendering for CLI reports: bar charts for
// measurement histograms and line charts for sweep metrics.  All output is
// deterministic (fixed-precision formatting, no timestamps) so identical
// inputs produce byte-identical documents.

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qtr {

// One bar of a histogram: label, sampled count, and (optionally) the exact
// probability to overlay as a marker for comparison against the samples.
struct HistogramBar {
  std::string label;
  long long count = 0;
  std::optional<double> exact;  // probability in [0, 1]
};

// Renders a bar chart of sampled counts.  When any bar carries an exact
// probability, a second axis-aligned overlay marks exact_probability * shots
// on top of the bars so sampling error is visible at a glance.
std::string render_histogram_svg(const std::string& title,
                                 const std::vector<HistogramBar>& bars,
                                 long long shots);

// One line of a line chart.
struct LineSeries {
  std::string name;
  std::string color;                          // e.g. "#d62728"
  std::vector<std::pair<double, double>> points;  // (x, y), unsorted ok
};

// Renders a multi-series line chart with axis labels, tick marks, and a
// legend.  Used for sweep plots (metric vs. node count, one series per
// simulation mode).
std::string render_line_chart_svg(const std::string& title,
                                  const std::string& x_label,
                                  const std::string& y_label,
                                  const std::vector<LineSeries>& series);

}  // namespace qtr
