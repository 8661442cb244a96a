#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lpf/metrics.hpp"
#include "lpf/rng.hpp"
#include "lpf/synth.hpp"

using namespace lpf;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  return PointCloud(std::move(pts));
}

double brute_rmse(const PointCloud& test, const PointCloud& reference) {
  double acc = 0.0;
  for (const Vec3& p : test.points()) {
    double best = 1e300;
    for (const Vec3& q : reference.points()) best = std::min(best, (p - q).squaredNorm());
    acc += best;
  }
  return std::sqrt(acc / static_cast<double>(test.size()));
}

} // namespace

TEST_CASE("rmse of identical clouds is zero") {
  PointCloud cloud = random_cloud(200, 1);
  CHECK(rmse(cloud, cloud) == 0.0);
}

TEST_CASE("rmse of a small translation against a dense reference") {
  SynthResult dense = synth_shape(ShapeKind::kPlane, 200000, 0.0, 2);
  const double eps = 0.02;
  std::vector<Vec3> moved;
  for (std::size_t i = 0; i < 2000; ++i)
    moved.push_back(dense.noisy.point(i * 97 % dense.noisy.size()) + Vec3(0, 0, eps));
  PointCloud test{std::move(moved)};
  CHECK(rmse(test, dense.noisy) == doctest::Approx(eps).epsilon(0.02));
}

TEST_CASE("rmse matches the quadratic brute force exactly") {
  PointCloud a = random_cloud(100, 3);
  PointCloud b = random_cloud(100, 4);
  CHECK(rmse(a, b) == doctest::Approx(brute_rmse(a, b)).epsilon(1e-14));
}

TEST_CASE("rmse is directional; the symmetric variant takes the max") {
  // b contains a plus far outliers: rmse(a,b) = 0 but rmse(b,a) > 0
  PointCloud a = random_cloud(50, 5);
  std::vector<Vec3> extended(a.points().begin(), a.points().end());
  extended.emplace_back(50, 50, 50);
  PointCloud b{std::move(extended)};
  CHECK(rmse(a, b) == 0.0);
  CHECK(rmse(b, a) > 1.0);
  CHECK(symmetric_rmse(a, b) == doctest::Approx(rmse(b, a)));
}

TEST_CASE("rmse rejects empty input") {
  PointCloud empty, one(std::vector<Vec3>{{0, 0, 0}});
  CHECK_THROWS_AS(rmse(empty, one), std::invalid_argument);
  CHECK_THROWS_AS(rmse(one, empty), std::invalid_argument);
}

TEST_CASE("nn histogram of a unit grid concentrates at distance 1") {
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) pts.emplace_back(i, j, 0.0);
  PointCloud cloud{std::move(pts)};
  HistogramReport report = nn_histogram(cloud, 64);
  CHECK(report.mean == doctest::Approx(1.0));
  CHECK(report.median == doctest::Approx(1.0));
  std::size_t total = 0, nonzero_bins = 0;
  for (std::size_t b = 0; b < report.counts.size(); ++b) {
    total += report.counts[b];
    if (report.counts[b] > 0) ++nonzero_bins;
  }
  CHECK(total == cloud.size());
  CHECK(nonzero_bins == 1);
}

TEST_CASE("nn histogram of two points") {
  PointCloud cloud(std::vector<Vec3>{{0, 0, 0}, {0, 3, 0}});
  HistogramReport report = nn_histogram(cloud, 16);
  CHECK(report.mean == doctest::Approx(3.0));
  CHECK(report.median == doctest::Approx(3.0));
  std::size_t total = 0;
  for (auto c : report.counts) total += c;
  CHECK(total == 2);
}

TEST_CASE("histogram counts always sum to the point count") {
  // a far pair lands beyond 4*median and must be clamped into the last bin
  std::vector<Vec3> pts;
  for (int i = 0; i < 10; ++i) pts.emplace_back(0.1 * i, 0, 0);
  pts.emplace_back(100, 0, 0);
  pts.emplace_back(101.5, 0, 0);
  PointCloud cloud{std::move(pts)};
  HistogramReport report = nn_histogram(cloud, 8);
  std::size_t total = 0;
  for (auto c : report.counts) total += c;
  CHECK(total == cloud.size());
  CHECK(report.counts.back() >= 2);
}

TEST_CASE("histogram is invariant under rigid motion") {
  PointCloud cloud = random_cloud(300, 6);
  auto rot = make_rng(1, RngStream::kFrames);
  Mat3 q = random_rotation(rot);
  std::vector<Vec3> moved;
  for (const Vec3& p : cloud.points()) moved.push_back(q * p + Vec3(5, -3, 2));
  PointCloud rigid{std::move(moved)};
  HistogramReport a = nn_histogram(cloud, 32);
  HistogramReport b = nn_histogram(rigid, 32);
  CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
  CHECK(a.median == doctest::Approx(b.median).epsilon(1e-12));
  for (std::size_t i = 0; i < a.counts.size(); ++i) CHECK(a.counts[i] == b.counts[i]);
}

TEST_CASE("histogram csv lists one row per bin") {
  PointCloud cloud = random_cloud(50, 7);
  HistogramReport report = nn_histogram(cloud, 4);
  std::string csv = histogram_csv(report);
  int lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 6); // header + 4 bins + summary comment
}
