#include "lpf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lpf/spatial_index.hpp"

namespace lpf {

double rmse(const PointCloud& test, const PointCloud& reference) {
  if (test.empty() || reference.empty())
    throw std::invalid_argument("rmse: clouds must be non-empty");
  SpatialIndex index(reference);
  double acc = 0.0;
  for (const Vec3& p : test.points()) {
    int nn = index.nearest(p);
    acc += (p - reference.point(static_cast<std::size_t>(nn))).squaredNorm();
  }
  return std::sqrt(acc / static_cast<double>(test.size()));
}

double symmetric_rmse(const PointCloud& a, const PointCloud& b) {
  return std::max(rmse(a, b), rmse(b, a));
}

HistogramReport nn_histogram(const PointCloud& cloud, int bins) {
  if (cloud.size() < 2) throw std::invalid_argument("nn_histogram: need at least 2 points");
  if (bins < 1) throw std::invalid_argument("nn_histogram: need at least 1 bin");
  SpatialIndex index(cloud);
  std::vector<double> nn(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    int j = index.nearest(cloud.point(i), static_cast<int>(i));
    nn[i] = (cloud.point(static_cast<std::size_t>(j)) - cloud.point(i)).norm();
  }
  HistogramReport report;
  double mean = 0.0;
  for (double d : nn) mean += d;
  report.mean = mean / static_cast<double>(nn.size());
  std::vector<double> sorted = nn;
  std::sort(sorted.begin(), sorted.end());
  std::size_t n = sorted.size();
  report.median =
      (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  double top = 4.0 * report.median;
  if (top <= 0.0) top = std::max(sorted.back(), 1e-300);
  report.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b)
    report.edges[static_cast<std::size_t>(b)] = top * b / bins;
  report.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double d : nn) {
    int b = static_cast<int>(d / top * bins);
    b = std::clamp(b, 0, bins - 1); // overflow lands in the last bin
    ++report.counts[static_cast<std::size_t>(b)];
  }
  return report;
}

std::string histogram_csv(const HistogramReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < report.counts.size(); ++b)
    out << report.edges[b] << "," << report.edges[b + 1] << "," << report.counts[b] << "\n";
  out << "# mean=" << report.mean << " median=" << report.median << "\n";
  return out.str();
}

std::string energy_csv(const AnalysisState& state, bool per_atom) {
  std::ostringstream out;
  out.precision(12);
  double scale = per_atom ? 1.0 / static_cast<double>(state.config.atoms) : 1.0;
  out << "iter,l2_dict,l1_dict,total_dict,l2_pose,l1_pose,total_pose,"
         "l2_reprobe,l1_reprobe,total_reprobe\n";
  for (std::size_t i = 0; i < state.energy_log.size(); ++i) {
    const EnergyLogEntry& e = state.energy_log[i];
    out << (i + 1);
    for (const EnergyEntry* entry : {&e.after_dictionary, &e.after_pose, &e.after_reprobe})
      out << "," << entry->l2 * scale << "," << entry->l1 * scale << ","
          << entry->total * scale;
    out << "\n";
  }
  return out.str();
}

} // namespace lpf
