#include "lpf/local_frame.hpp"

#include <Eigen/SVD>
#include <stdexcept>

namespace lpf {

double LocalFrame::orthonormality_error() const {
  double e = (axes.transpose() * axes - Mat3::Identity()).cwiseAbs().maxCoeff();
  double handed = (axes.col(0).cross(axes.col(1)) - axes.col(2)).cwiseAbs().maxCoeff();
  return std::max(e, handed);
}

void LocalFrame::reorthonormalize() {
  Eigen::JacobiSVD<Mat3> svd(axes, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0.0) {
    Mat3 flip = Mat3::Identity();
    flip(2, 2) = -1.0;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  axes = r;
}

RigidFit fit_rigid(std::span<const Vec3> source, std::span<const Vec3> dest) {
  if (source.size() != dest.size())
    throw std::invalid_argument("fit_rigid: size mismatch");
  RigidFit fit;
  std::size_t n = source.size();
  if (n < 3) {
    fit.degenerate = true;
    return fit;
  }
  Vec3 src_mean = Vec3::Zero(), dst_mean = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    src_mean += source[i];
    dst_mean += dest[i];
  }
  src_mean /= static_cast<double>(n);
  dst_mean /= static_cast<double>(n);

  Mat3 cov = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i)
    cov += (source[i] - src_mean) * (dest[i] - dst_mean).transpose();

  Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // rank < 2 leaves a rotation degree of freedom undetermined
  double s0 = svd.singularValues()(0);
  if (s0 <= 0.0 || svd.singularValues()(1) <= 1e-12 * s0) {
    fit.degenerate = true;
    return fit;
  }
  Mat3 d = Mat3::Identity();
  if ((svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0) d(2, 2) = -1.0;
  // s maps source onto dest; the stored rotation is its inverse so that
  // R^T source - t lands on dest
  Mat3 s = svd.matrixV() * d * svd.matrixU().transpose();
  fit.transform.rotation = s.transpose();
  fit.transform.translation = s * src_mean - dst_mean;
  return fit;
}

double rigid_objective(std::span<const Vec3> source, std::span<const Vec3> dest,
                       const RigidTransform& transform) {
  if (source.size() != dest.size())
    throw std::invalid_argument("rigid_objective: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < source.size(); ++i)
    sum += (transform.rotation.transpose() * source[i] - transform.translation - dest[i])
               .squaredNorm();
  return sum;
}

} // namespace lpf
