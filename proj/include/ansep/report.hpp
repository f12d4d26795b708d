#pragma once

#include <string>
#include <vector>

namespace ansep {

// One named trace of a line plot. x and y must have equal length; points
// render in index order.
struct Curve {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Curve> curves;
};

// Self-contained SVG line plot: axes, ticks, one polyline per curve, and a
// legend once there is more than one curve. Output depends only on the spec,
// so re-rendering the same spec gives identical bytes.
std::string render_svg(const PlotSpec& spec);

// Training trajectory as CSV with columns iteration,normalized_mse. The
// iteration column is the sample index (0-based). An empty trajectory
// produces the header line only.
std::string trajectory_csv(const std::vector<double>& normalized_mse);

// Generic numeric table, one column name per value column. Every row must
// match the column count. Values print as shortest round-trip doubles.
std::string table_csv(const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows);

// Canonical formatting used in every artifact (shortest representation that
// round-trips a double, C locale, no locale dependence).
std::string format_double(double v);

void write_file(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

}  // namespace ansep
