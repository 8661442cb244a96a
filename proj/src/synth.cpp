#include "lpf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lpf/rng.hpp"

namespace lpf {

namespace {

using namespace shapes;

// cube_with_curve curve: sine wave threaded through the cube along x
constexpr double kCurveSpan = 3.1;
constexpr double kCurveAmp = 0.9;
constexpr double kCurveFreq = 1.1;
constexpr double kCurveOffset = 0.55;

Vec3 curve_point(double t) {
  return Vec3(t, kCurveOffset + kCurveAmp * std::sin(kCurveFreq * t),
              -kCurveOffset + kCurveAmp * std::cos(kCurveFreq * t));
}

Vec3 curve_tangent(double t) {
  return Vec3(1.0, kCurveAmp * kCurveFreq * std::cos(kCurveFreq * t),
              -kCurveAmp * kCurveFreq * std::sin(kCurveFreq * t));
}

double curve_arc_length() {
  // fixed fine quadrature; the generator only needs a stable total
  const int steps = 4096;
  double len = 0.0;
  for (int i = 0; i < steps; ++i) {
    double t = -kCurveSpan + (2.0 * kCurveSpan) * (i + 0.5) / steps;
    len += curve_tangent(t).norm() * (2.0 * kCurveSpan / steps);
  }
  return len;
}

// uniform-by-arc-length parameter lookup table
std::vector<double> curve_arc_table(int entries) {
  std::vector<double> ts(static_cast<std::size_t>(entries));
  const int steps = 8192;
  double total = 0.0;
  std::vector<double> cum(steps + 1, 0.0);
  for (int i = 0; i < steps; ++i) {
    double t = -kCurveSpan + (2.0 * kCurveSpan) * (i + 0.5) / steps;
    total += curve_tangent(t).norm() * (2.0 * kCurveSpan / steps);
    cum[static_cast<std::size_t>(i) + 1] = total;
  }
  std::size_t j = 0;
  for (int e = 0; e < entries; ++e) {
    double target = total * (e + 0.5) / entries;
    while (j + 1 < cum.size() && cum[j + 1] < target) ++j;
    double frac = (target - cum[j]) / std::max(cum[j + 1] - cum[j], 1e-300);
    ts[static_cast<std::size_t>(e)] =
        -kCurveSpan + (2.0 * kCurveSpan) * (static_cast<double>(j) + frac) / steps;
  }
  return ts;
}

Vec3 sample_square(std::mt19937_64& rng, double side) {
  std::uniform_real_distribution<double> u(0.0, side);
  return Vec3(u(rng), u(rng), 0.0);
}

// uniform over the 6 faces of a cube centered at the origin
Vec3 sample_cube_surface(std::mt19937_64& rng, double side) {
  std::uniform_real_distribution<double> u(-0.5 * side, 0.5 * side);
  std::uniform_int_distribution<int> face(0, 5);
  int f = face(rng);
  double a = u(rng), b = u(rng);
  double h = 0.5 * side * (f % 2 == 0 ? 1.0 : -1.0);
  switch (f / 2) {
    case 0: return Vec3(h, a, b);
    case 1: return Vec3(a, h, b);
    default: return Vec3(a, b, h);
  }
}

Vec3 sample_sphere(std::mt19937_64& rng, double radius) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v(g(rng), g(rng), g(rng));
  double n = v.norm();
  while (n < 1e-12) {
    v = Vec3(g(rng), g(rng), g(rng));
    n = v.norm();
  }
  return radius * v / n;
}

struct NetCircle {
  Mat3 axes;     // circle lives in the span of cols 0,1
  double radius;
  double z = 0.0;
};

// 8 meridian great circles plus 5 latitude rings
std::vector<NetCircle> net_circles() {
  std::vector<NetCircle> circles;
  for (int k = 0; k < 8; ++k) {
    double a = M_PI * k / 8.0;
    NetCircle c;
    c.axes.col(0) = Vec3(std::cos(a), std::sin(a), 0.0);
    c.axes.col(1) = Vec3(0.0, 0.0, 1.0);
    c.axes.col(2) = c.axes.col(0).cross(c.axes.col(1));
    c.radius = kNetRadius;
    circles.push_back(c);
  }
  for (int k = -2; k <= 2; ++k) {
    double phi = k * M_PI / 6.0;
    NetCircle c;
    c.axes = Mat3::Identity();
    c.radius = kNetRadius * std::cos(phi);
    c.z = kNetRadius * std::sin(phi);
    circles.push_back(c);
  }
  return circles;
}

constexpr double kSinAmp = 0.8;
constexpr double kSinPeriod = 4.0;
constexpr double kSinSide = 8.0;

Vec3 sinusoid_point(double x, double y) {
  return Vec3(x, y, kSinAmp * std::sin(2.0 * M_PI * x / kSinPeriod));
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = b - a;
  double len2 = ab.squaredNorm();
  double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

double polyline_distance(const Vec3& p, double t_min, double t_max, int samples,
                         const std::function<Vec3(double)>& curve) {
  // coarse scan, then golden-section refinement around the best bracket
  double best = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i <= samples; ++i) {
    double t = t_min + (t_max - t_min) * i / samples;
    double d = (p - curve(t)).norm();
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  double lo = t_min + (t_max - t_min) * std::max(best_i - 1, 0) / samples;
  double hi = t_min + (t_max - t_min) * std::min(best_i + 1, samples) / samples;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = hi - phi * (hi - lo), b = lo + phi * (hi - lo);
  double fa = (p - curve(a)).norm(), fb = (p - curve(b)).norm();
  for (int iter = 0; iter < 80; ++iter) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - phi * (hi - lo);
      fa = (p - curve(a)).norm();
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + phi * (hi - lo);
      fb = (p - curve(b)).norm();
    }
  }
  return std::min({best, fa, fb});
}

} // namespace

ShapeKind shape_kind_from_string(const std::string& name) {
  if (name == "plane") return ShapeKind::kPlane;
  if (name == "cube") return ShapeKind::kCube;
  if (name == "cube_with_curve") return ShapeKind::kCubeWithCurve;
  if (name == "sphere_curve_net") return ShapeKind::kSphereCurveNet;
  if (name == "sinusoid") return ShapeKind::kSinusoid;
  throw std::invalid_argument("unknown shape kind: " + name);
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::kPlane: return "plane";
    case ShapeKind::kCube: return "cube";
    case ShapeKind::kCubeWithCurve: return "cube_with_curve";
    case ShapeKind::kSphereCurveNet: return "sphere_curve_net";
    case ShapeKind::kSinusoid: return "sinusoid";
  }
  return "?";
}

SynthResult synth_shape(ShapeKind kind, std::size_t n, double noise_sigma,
                        std::uint64_t rng_seed) {
  if (n == 0) throw std::invalid_argument("synth_shape: n must be positive");
  if (noise_sigma < 0.0) throw std::invalid_argument("synth_shape: noise_sigma must be >= 0");
  auto rng = make_rng(rng_seed, RngStream::kSynth);
  std::vector<Vec3> pts;
  pts.reserve(n);

  switch (kind) {
    case ShapeKind::kPlane: {
      for (std::size_t i = 0; i < n; ++i) pts.push_back(sample_square(rng, kPlaneSide));
      break;
    }
    case ShapeKind::kCube: {
      for (std::size_t i = 0; i < n; ++i) pts.push_back(sample_cube_surface(rng, kCubeSide));
      break;
    }
    case ShapeKind::kCubeWithCurve: {
      // matched sampling density: curve linear density = sqrt(surface density)
      double area = 6.0 * kCubeCurveSide * kCubeCurveSide;
      double length = curve_arc_length();
      // n = area*rho + length*sqrt(rho) -> solve for sqrt(rho)
      double s = (-length + std::sqrt(length * length + 4.0 * area * n)) / (2.0 * area);
      std::size_t n_curve = std::min<std::size_t>(
          n - 1, static_cast<std::size_t>(std::llround(length * s)));
      std::size_t n_cube = n - n_curve;
      for (std::size_t i = 0; i < n_cube; ++i)
        pts.push_back(sample_cube_surface(rng, kCubeCurveSide));
      if (n_curve > 0) {
        auto ts = curve_arc_table(static_cast<int>(n_curve));
        std::uniform_real_distribution<double> jitter(-0.5, 0.5);
        double dt = 2.0 * kCurveSpan / static_cast<double>(n_curve);
        for (double t : ts) {
          double tj = std::clamp(t + jitter(rng) * dt, -kCurveSpan, kCurveSpan);
          pts.push_back(curve_point(tj));
        }
      }
      break;
    }
    case ShapeKind::kSphereCurveNet: {
      auto circles = net_circles();
      double net_length = 0.0;
      for (const auto& c : circles) net_length += 2.0 * M_PI * c.radius;
      double area = 4.0 * M_PI * kSphereRadius * kSphereRadius;
      // the net is sampled at 3x the matched linear density so the curves
      // stay resolvable under noise comparable to the surface spacing
      const double k = 3.0;
      double kl = k * net_length;
      double s = (-kl + std::sqrt(kl * kl + 4.0 * area * n)) / (2.0 * area);
      std::size_t n_net = std::min<std::size_t>(
          n - 1, static_cast<std::size_t>(std::llround(kl * s)));
      std::size_t n_sphere = n - n_net;
      for (std::size_t i = 0; i < n_sphere; ++i)
        pts.push_back(sample_sphere(rng, kSphereRadius));
      std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
      for (std::size_t i = 0; i < n_net; ++i) {
        // circle chosen proportional to its length
        std::uniform_real_distribution<double> pick(0.0, net_length);
        double target = pick(rng), acc = 0.0;
        const NetCircle* chosen = &circles.back();
        for (const auto& c : circles) {
          acc += 2.0 * M_PI * c.radius;
          if (target <= acc) {
            chosen = &c;
            break;
          }
        }
        double a = angle(rng);
        Vec3 p = chosen->axes.col(0) * (chosen->radius * std::cos(a)) +
                 chosen->axes.col(1) * (chosen->radius * std::sin(a));
        p.z() += chosen->z;
        pts.push_back(p);
      }
      break;
    }
    case ShapeKind::kSinusoid: {
      std::uniform_real_distribution<double> u(0.0, kSinSide);
      for (std::size_t i = 0; i < n; ++i) {
        double x = u(rng), y = u(rng);
        pts.push_back(sinusoid_point(x, y));
      }
      break;
    }
  }

  SynthResult result;
  result.ground_truth = PointCloud(pts);
  if (noise_sigma > 0.0) {
    std::normal_distribution<double> g(0.0, noise_sigma);
    for (Vec3& p : pts) p += Vec3(g(rng), g(rng), g(rng));
  }
  result.noisy = PointCloud(std::move(pts));
  return result;
}

namespace shapes {

double plane_distance(const Vec3& p) { return std::abs(p.z()); }

double cube_distance(const Vec3& p, double side) {
  double h = 0.5 * side;
  Vec3 a = p.cwiseAbs();
  if (a.maxCoeff() >= h) {
    // outside or on the boundary: distance to the solid cube
    Vec3 d = (a - Vec3(h, h, h)).cwiseMax(Vec3::Zero());
    return d.norm();
  }
  return h - a.maxCoeff(); // inside: distance to the nearest face
}

double cube_with_curve_curve_distance(const Vec3& p) {
  return polyline_distance(p, -kCurveSpan, kCurveSpan, 2048, curve_point);
}

double cube_with_curve_distance(const Vec3& p) {
  return std::min(cube_distance(p, kCubeCurveSide), cube_with_curve_curve_distance(p));
}

double cube_with_curve_edge_distance(const Vec3& p) {
  double h = 0.5 * kCubeCurveSide;
  double best = std::numeric_limits<double>::infinity();
  // 12 edges: two coordinates pinned at +-h, one free in [-h, h]
  for (int axis = 0; axis < 3; ++axis) {
    for (int s1 = -1; s1 <= 1; s1 += 2) {
      for (int s2 = -1; s2 <= 1; s2 += 2) {
        Vec3 a = Vec3::Zero(), b = Vec3::Zero();
        a[axis] = -h;
        b[axis] = h;
        int o1 = (axis + 1) % 3, o2 = (axis + 2) % 3;
        a[o1] = b[o1] = s1 * h;
        a[o2] = b[o2] = s2 * h;
        best = std::min(best, point_segment_distance(p, a, b));
      }
    }
  }
  return best;
}

double sphere_curve_net_distance(const Vec3& p) {
  double best = std::abs(p.norm() - kSphereRadius);
  for (const auto& c : net_circles()) {
    Vec3 q = p;
    q.z() -= c.z;
    Vec3 local(q.dot(c.axes.col(0)), q.dot(c.axes.col(1)), q.dot(c.axes.col(2)));
    double in_plane = std::hypot(local.x(), local.y());
    best = std::min(best, std::hypot(in_plane - c.radius, local.z()));
  }
  return best;
}

double sinusoid_distance(const Vec3& p) {
  // distance along z only near-vertical; do a local 2D refine over x
  double best = std::numeric_limits<double>::infinity();
  double x0 = p.x();
  for (int i = -200; i <= 200; ++i) {
    double x = x0 + i * 0.005;
    Vec3 q = sinusoid_point(x, p.y());
    best = std::min(best, (p - q).norm());
  }
  return best;
}

} // namespace shapes

} // namespace lpf
