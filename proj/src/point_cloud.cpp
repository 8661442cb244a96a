#include "lpf/point_cloud.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpf {

PointCloud::PointCloud(std::vector<Vec3> points) : points_(std::move(points)) {
  for (const Vec3& p : points_) check_finite(p);
  recompute_bbox();
}

void PointCloud::push_back(const Vec3& p) {
  check_finite(p);
  points_.push_back(p);
  if (points_.size() == 1) {
    bbox_min_ = bbox_max_ = p;
  } else {
    bbox_min_ = bbox_min_.cwiseMin(p);
    bbox_max_ = bbox_max_.cwiseMax(p);
  }
  bbox_diagonal_ = (bbox_max_ - bbox_min_).norm();
}

void PointCloud::set_point(std::size_t i, const Vec3& p) {
  check_finite(p);
  points_.at(i) = p;
  recompute_bbox();
}

void PointCloud::recompute_bbox() {
  if (points_.empty()) {
    bbox_min_ = bbox_max_ = Vec3::Zero();
    bbox_diagonal_ = 0.0;
    return;
  }
  bbox_min_ = bbox_max_ = points_[0];
  for (const Vec3& p : points_) {
    bbox_min_ = bbox_min_.cwiseMin(p);
    bbox_max_ = bbox_max_.cwiseMax(p);
  }
  bbox_diagonal_ = (bbox_max_ - bbox_min_).norm();
}

void PointCloud::check_finite(const Vec3& p) const {
  if (!p.allFinite()) throw std::invalid_argument("point cloud coordinates must be finite");
}

} // namespace lpf
