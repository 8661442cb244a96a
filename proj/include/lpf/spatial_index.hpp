#pragma once

#include <vector>

#include "lpf/geometry.hpp"
#include "lpf/point_cloud.hpp"

namespace lpf {

/// kd-tree over a point cloud. Immutable after construction; concurrent
/// queries are safe.
///
/// Query contracts (relied on by oracle tests):
///  - radius_indices returns exactly the points with distance <= radius
///    (closed ball), sorted by point index.
///  - knn returns the k nearest points ordered by (distance, index); exact
///    distance ties are broken toward the lower index.
class SpatialIndex {
public:
  explicit SpatialIndex(const PointCloud& cloud);

  std::vector<int> radius_indices(const Vec3& query, double radius) const;
  std::vector<int> knn(const Vec3& query, int k) const;

  /// Index of the nearest point, optionally excluding one index
  /// (used for nearest-neighbor-distance statistics).
  int nearest(const Vec3& query, int exclude = -1) const;

  std::size_t size() const { return pts_.size(); }

private:
  struct Node {
    Vec3 bb_min, bb_max;
    int begin = 0, end = 0; // leaf range into order_
    int left = -1, right = -1;
  };

  int build(int begin, int end);
  double min_dist2(const Node& n, const Vec3& q) const;
  double max_dist2(const Node& n, const Vec3& q) const;

  std::vector<Vec3> pts_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

} // namespace lpf
