#pragma once

#include <string>
#include <utility>
#include <vector>

// Minimal static SVG plots for run artifacts: line/scatter plots with
// optional log axes and error bars, and a discrete histogram. Output is
// deterministic text so identical inputs give identical files.

namespace ea::svg {

struct Series {
  std::string label;
  std::vector<double> x, y;
  std::vector<double> yerr;  // empty or same length as y
};

struct LinePlot {
  std::string title, xlabel, ylabel;
  bool logx = false, logy = false;
  std::vector<Series> series;

  std::string render(int width = 720, int height = 480) const;
};

struct Histogram {
  std::string title, xlabel, ylabel;
  std::vector<std::pair<double, double>> bars;  // (value, weight)

  std::string render(int width = 720, int height = 480) const;
};

}  // namespace ea::svg
