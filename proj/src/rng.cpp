#include "lpf/rng.hpp"

#include <cmath>

namespace lpf {

Mat3 random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u1 = unit(rng), u2 = unit(rng), u3 = unit(rng);
  double two_pi = 2.0 * M_PI;
  double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  Eigen::Quaterniond q(a * std::sin(two_pi * u2), a * std::cos(two_pi * u2),
                       b * std::sin(two_pi * u3), b * std::cos(two_pi * u3));
  return q.normalized().toRotationMatrix();
}

Vec3 random_in_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double r = radius * std::sqrt(unit(rng));
  double theta = 2.0 * M_PI * unit(rng);
  return Vec3(r * std::cos(theta), r * std::sin(theta), 0.0);
}

} // namespace lpf
