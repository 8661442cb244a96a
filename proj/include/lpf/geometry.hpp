#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace lpf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

} // namespace lpf
