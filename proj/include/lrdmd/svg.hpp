#ifndef LRDMD_SVG_HPP
#define LRDMD_SVG_HPP

#include <string>
#include <vector>

namespace lrdmd {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // non-positive or non-finite values leave a gap
};

struct ChartOptions {
  std::string title;
  std::string x_label = "k";
  std::string y_label = "normalized error";
  int width = 640;
  int height = 420;
};

// Line chart with a linear x axis and a base-10 log y axis. Output depends
// only on the inputs.
std::string render_log_chart(const std::vector<Series>& series, const ChartOptions& opts = {});

}  // namespace lrdmd

#endif
