#include "ssma/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ssma {

Real metric_value(const TrainerMetricsRow& row, const std::string& name) {
  if (name == "iteration") return static_cast<Real>(row.iteration);
  if (name == "total_time") return row.total_time;
  if (name == "env_time") return row.env_time;
  if (name == "inference_time") return row.inference_time;
  if (name == "update_time") return row.update_time;
  if (name == "interaction_count") return static_cast<Real>(row.interaction_count);
  if (name == "sampled_action_count") {
    return static_cast<Real>(row.sampled_action_count);
  }
  if (name == "mean_outcome_reward") return row.mean_outcome_reward;
  if (name == "eval_success_rate") return row.eval_success_rate;
  if (name == "mean_critic_loss") return row.mean_critic_loss;
  if (name == "mean_actor_loss") return row.mean_actor_loss;
  throw ContractError("unknown metric name: " + name);
}

bool is_metric_name(const std::string& name) {
  try {
    metric_value(TrainerMetricsRow{}, name);
    return true;
  } catch (const ContractError&) {
    return false;
  }
}

ChartSeries aggregate_series(const std::string& label, const std::string& color,
                             const std::vector<std::vector<TrainerMetricsRow>>& runs,
                             const std::string& x_metric,
                             const std::string& y_metric, Real x_max,
                             int grid_points) {
  ChartSeries series;
  series.label = label;
  series.color = color;
  for (int g = 0; g <= grid_points; ++g) {
    const Real x = x_max * static_cast<Real>(g) / static_cast<Real>(grid_points);
    std::vector<Real> values;
    for (const std::vector<TrainerMetricsRow>& rows : runs) {
      Real y = 0.0;  // before the first recorded point the metric reads 0
      for (const TrainerMetricsRow& row : rows) {
        if (metric_value(row, x_metric) > x) break;
        y = metric_value(row, y_metric);
      }
      values.push_back(y);
    }
    if (values.empty()) continue;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    series.x.push_back(x);
    series.median.push_back(n % 2 == 1 ? values[n / 2]
                                       : 0.5 * (values[n / 2 - 1] + values[n / 2]));
    series.lower.push_back(values.front());
    series.upper.push_back(values.back());
  }
  return series;
}

namespace {

std::string fmt(Real v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.6g", v);
  return buffer;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec, int width, int height) {
  if (!is_metric_name(spec.x_metric) || !is_metric_name(spec.y_metric)) {
    throw ContractError("chart references an unknown metric");
  }
  const Real margin_left = 70, margin_right = 20, margin_top = 40,
             margin_bottom = 55;
  const Real plot_w = width - margin_left - margin_right;
  const Real plot_h = height - margin_top - margin_bottom;

  Real x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  bool any = false;
  for (const ChartSeries& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!any) {
        x_min = x_max = s.x[i];
        y_min = s.lower[i];
        y_max = s.upper[i];
        any = true;
      }
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.lower[i]);
      y_max = std::max(y_max, s.upper[i]);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1;
  if (y_max <= y_min) y_max = y_min + 1;
  const Real y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  auto px = [&](Real x) {
    return margin_left + (x - x_min) / (x_max - x_min) * plot_w;
  };
  auto py = [&](Real y) {
    return margin_top + (1 - (y - y_min) / (y_max - y_min)) * plot_h;
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << spec.title
      << "</text>\n";

  // Axes with 5 ticks per dimension.
  svg << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int t = 0; t <= 5; ++t) {
    const Real xv = x_min + (x_max - x_min) * t / 5.0;
    const Real yv = y_min + (y_max - y_min) * t / 5.0;
    svg << "<line x1=\"" << fmt(px(xv)) << "\" y1=\"" << fmt(margin_top)
        << "\" x2=\"" << fmt(px(xv)) << "\" y2=\""
        << fmt(margin_top + plot_h) << "\" stroke=\"#ddd\"/>\n";
    svg << "<line x1=\"" << fmt(margin_left) << "\" y1=\"" << fmt(py(yv))
        << "\" x2=\"" << fmt(margin_left + plot_w) << "\" y2=\""
        << fmt(py(yv)) << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << fmt(px(xv)) << "\" y=\""
        << fmt(margin_top + plot_h + 16) << "\" text-anchor=\"middle\">"
        << fmt(xv) << "</text>\n";
    svg << "<text x=\"" << fmt(margin_left - 6) << "\" y=\"" << fmt(py(yv) + 4)
        << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
      << spec.x_metric << "</text>\n";
  svg << "<text x=\"16\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
      << "transform=\"rotate(-90 16 " << height / 2 << ")\">" << spec.y_metric
      << "</text>\n";

  for (const ChartSeries& s : spec.series) {
    if (s.x.empty()) continue;
    // Band polygon: upper forward, lower reversed.
    svg << "<polygon fill=\"" << s.color << "\" opacity=\"0.15\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << fmt(px(s.x[i])) << ',' << fmt(py(s.upper[i])) << ' ';
    }
    for (std::size_t i = s.x.size(); i > 0; --i) {
      svg << fmt(px(s.x[i - 1])) << ',' << fmt(py(s.lower[i - 1])) << ' ';
    }
    svg << "\"/>\n";
    svg << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      svg << fmt(px(s.x[i])) << ',' << fmt(py(s.median[i])) << ' ';
    }
    svg << "\"/>\n";
  }

  // Legend.
  Real legend_y = margin_top + 8;
  for (const ChartSeries& s : spec.series) {
    svg << "<rect x=\"" << fmt(margin_left + 10) << "\" y=\""
        << fmt(legend_y - 9) << "\" width=\"14\" height=\"4\" fill=\""
        << s.color << "\"/>\n";
    svg << "<text x=\"" << fmt(margin_left + 30) << "\" y=\"" << fmt(legend_y - 3)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ssma
