#pragma once

#include <string>
#include <vector>

#include "ssma/metrics.hpp"
#include "ssma/types.hpp"

namespace ssma {

/// One aggregated line: per-grid-point median with a min/max band.
struct ChartSeries {
  std::string label;
  std::string color;
  std::vector<Real> x;
  std::vector<Real> median;
  std::vector<Real> lower;
  std::vector<Real> upper;
};

struct ChartSpec {
  std::string title;
  std::string x_metric;  // must name a metrics CSV column
  std::string y_metric;
  std::vector<ChartSeries> series;
};

/// Looks up a metric by its CSV column name; unknown names throw.
Real metric_value(const TrainerMetricsRow& row, const std::string& name);
bool is_metric_name(const std::string& name);

/// Builds one series from per-seed metric histories by step-interpolating
/// each run onto a shared x grid and taking median/min/max per point.
ChartSeries aggregate_series(const std::string& label, const std::string& color,
                             const std::vector<std::vector<TrainerMetricsRow>>& runs,
                             const std::string& x_metric,
                             const std::string& y_metric, Real x_max,
                             int grid_points = 120);

/// Renders a static line chart (median lines plus translucent bands).
std::string render_line_chart(const ChartSpec& spec, int width = 760,
                              int height = 480);

}  // namespace ssma
