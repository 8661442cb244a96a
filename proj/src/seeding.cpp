#include "lpf/seeding.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "lpf/rng.hpp"

namespace lpf {

namespace {

Seed make_seed(const Vec3& position, std::uint64_t rng_seed) {
  auto rng = make_position_rng(rng_seed, position, RngStream::kFrames);
  return Seed{position, random_rotation(rng)};
}

// Adds a seed at every point farther than coverage_radius from all seeds.
// Scanning in canonical order keeps the result independent of input order.
void ensure_coverage(const PointCloud& cloud, const SpatialIndex& index,
                     double coverage_radius, std::uint64_t rng_seed,
                     std::vector<Seed>& seeds) {
  std::vector<std::uint8_t> covered(cloud.size(), 0);
  for (const Seed& s : seeds)
    for (int idx : index.radius_indices(s.position, coverage_radius))
      covered[static_cast<std::size_t>(idx)] = 1;
  for (int idx : canonical_order(cloud)) {
    if (covered[static_cast<std::size_t>(idx)]) continue;
    const Vec3& p = cloud.point(static_cast<std::size_t>(idx));
    seeds.push_back(make_seed(p, rng_seed));
    for (int j : index.radius_indices(p, coverage_radius))
      covered[static_cast<std::size_t>(j)] = 1;
  }
}

} // namespace

std::vector<int> canonical_order(const PointCloud& cloud) {
  std::vector<int> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Vec3& pa = cloud.point(static_cast<std::size_t>(a));
    const Vec3& pb = cloud.point(static_cast<std::size_t>(b));
    if (pa.x() != pb.x()) return pa.x() < pb.x();
    if (pa.y() != pb.y()) return pa.y() < pb.y();
    if (pa.z() != pb.z()) return pa.z() < pb.z();
    return a < b;
  });
  return order;
}

SeedSet poisson_seed(const PointCloud& cloud, const SpatialIndex& index,
                     double rejection_radius, double coverage_radius,
                     std::uint64_t rng_seed) {
  if (cloud.empty()) throw std::invalid_argument("poisson_seed: empty cloud");
  if (rejection_radius <= 0.0 || rejection_radius > coverage_radius)
    throw std::invalid_argument("poisson_seed: need 0 < rejection_radius <= coverage_radius");

  std::vector<int> permutation(cloud.size());
  std::iota(permutation.begin(), permutation.end(), 0);
  auto rng = make_rng(rng_seed, RngStream::kSeeding);
  std::shuffle(permutation.begin(), permutation.end(), rng);

  SeedSet set;
  set.coverage_radius = coverage_radius;
  double rej2 = rejection_radius * rejection_radius;
  for (int idx : permutation) {
    const Vec3& p = cloud.point(static_cast<std::size_t>(idx));
    bool ok = true;
    for (const Seed& s : set.seeds) { // seed counts stay small; linear scan
      if ((s.position - p).squaredNorm() < rej2) {
        ok = false;
        break;
      }
    }
    if (ok) set.seeds.push_back(make_seed(p, rng_seed));
  }
  ensure_coverage(cloud, index, coverage_radius, rng_seed, set.seeds);
  return set;
}

SeedSet stride_seed(const PointCloud& cloud, const SpatialIndex& index,
                    int stride, double coverage_radius, std::uint64_t rng_seed) {
  if (cloud.empty()) throw std::invalid_argument("stride_seed: empty cloud");
  if (stride < 1) throw std::invalid_argument("stride_seed: stride must be >= 1");
  SeedSet set;
  set.coverage_radius = coverage_radius;
  std::vector<int> order = canonical_order(cloud);
  for (std::size_t i = 0; i < order.size(); i += static_cast<std::size_t>(stride))
    set.seeds.push_back(make_seed(cloud.point(static_cast<std::size_t>(order[i])), rng_seed));
  if (stride > 1) ensure_coverage(cloud, index, coverage_radius, rng_seed, set.seeds);
  return set;
}

double estimate_tau_p(const PointCloud& cloud, const SpatialIndex& index) {
  if (cloud.size() < 2) throw std::invalid_argument("estimate_tau_p: need at least 2 points");
  std::vector<double> nn(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    int j = index.nearest(cloud.point(i), static_cast<int>(i));
    nn[i] = (cloud.point(static_cast<std::size_t>(j)) - cloud.point(i)).norm();
  }
  std::sort(nn.begin(), nn.end());
  std::size_t n = nn.size();
  double median = (n % 2 == 1) ? nn[n / 2] : 0.5 * (nn[n / 2 - 1] + nn[n / 2]);
  if (!(median > 0.0))
    throw std::runtime_error("estimate_tau_p: degenerate cloud (coincident points)");
  return median;
}

double estimate_tau_p(const PointCloud& cloud) {
  SpatialIndex index(cloud);
  return estimate_tau_p(cloud, index);
}

} // namespace lpf
