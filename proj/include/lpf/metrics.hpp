#pragma once

#include <string>
#include <vector>

#include "lpf/analysis.hpp"
#include "lpf/point_cloud.hpp"

namespace lpf {

/// One-sided RMS of distances from each test point to its nearest reference
/// point. Not symmetric: rmse(a, b) != rmse(b, a) in general.
double rmse(const PointCloud& test, const PointCloud& reference);

/// max(rmse(a,b), rmse(b,a)) for diagnostics.
double symmetric_rmse(const PointCloud& a, const PointCloud& b);

struct HistogramReport {
  std::vector<double> edges;       // bins + 1 edges
  std::vector<std::size_t> counts; // distances past the last edge land in the
                                   // final bin so counts sum to the point count
  double mean = 0.0;
  double median = 0.0;
};

/// Histogram of per-point nearest-neighbor distances over `bins` uniform bins
/// spanning [0, 4 * median]. Needs at least 2 points.
HistogramReport nn_histogram(const PointCloud& cloud, int bins = 64);

std::string histogram_csv(const HistogramReport& report);

/// Per-iteration energy table; per_atom divides values by the atom count.
std::string energy_csv(const AnalysisState& state, bool per_atom = false);

} // namespace lpf
