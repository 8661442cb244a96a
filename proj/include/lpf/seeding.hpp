#pragma once

#include <cstdint>
#include <vector>

#include "lpf/geometry.hpp"
#include "lpf/point_cloud.hpp"
#include "lpf/spatial_index.hpp"

namespace lpf {

struct Seed {
  Vec3 position;
  Mat3 frame; // columns t1, t2, n; orthonormal, right-handed
};

struct SeedSet {
  std::vector<Seed> seeds;
  double coverage_radius = 0.0;
};

/// Dart-throwing over a random permutation of the input points (no two seeds
/// closer than rejection_radius), then a greedy pass that seeds any point left
/// farther than coverage_radius from all seeds. Every input point ends up
/// within coverage_radius of some seed. Frames are random rotations drawn from
/// a per-position stream, so a given point always receives the same frame.
SeedSet poisson_seed(const PointCloud& cloud, const SpatialIndex& index,
                     double rejection_radius, double coverage_radius,
                     std::uint64_t rng_seed);

/// Every stride-th point (in canonical lexicographic position order) becomes a
/// seed, followed by the same greedy coverage pass.
SeedSet stride_seed(const PointCloud& cloud, const SpatialIndex& index,
                    int stride, double coverage_radius, std::uint64_t rng_seed);

/// Median distance to the nearest other point. Throws if the cloud has fewer
/// than 2 points or the median is not strictly positive (coincident points).
double estimate_tau_p(const PointCloud& cloud, const SpatialIndex& index);
double estimate_tau_p(const PointCloud& cloud);

/// Indices of points in canonical (lexicographic by x,y,z, then index) order.
std::vector<int> canonical_order(const PointCloud& cloud);

} // namespace lpf
