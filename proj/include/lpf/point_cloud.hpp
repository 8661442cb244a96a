#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lpf/geometry.hpp"

namespace lpf {

/// A set of 3D points with a cached bounding-box diagonal.
/// All coordinates are required to be finite; the diagonal is recomputed on
/// every mutation.
class PointCloud {
public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> points);

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Vec3& point(std::size_t i) const { return points_[i]; }
  std::span<const Vec3> points() const { return points_; }

  void push_back(const Vec3& p);
  void set_point(std::size_t i, const Vec3& p);

  double bbox_diagonal() const { return bbox_diagonal_; }
  Vec3 bbox_min() const { return bbox_min_; }
  Vec3 bbox_max() const { return bbox_max_; }

private:
  void recompute_bbox();
  void check_finite(const Vec3& p) const;

  std::vector<Vec3> points_;
  Vec3 bbox_min_ = Vec3::Zero();
  Vec3 bbox_max_ = Vec3::Zero();
  double bbox_diagonal_ = 0.0;
};

} // namespace lpf
