#pragma once

#include <string>
#include <vector>

namespace gatsac {

// Static line chart with optional error bars, no external dependencies.
struct SvgSeries {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> yerr;  // empty or same length as y
};

struct SvgChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  int width = 720;
  int height = 480;
  std::vector<SvgSeries> series;

  std::string render() const;
  void write(const std::string& path) const;
};

}  // namespace gatsac
