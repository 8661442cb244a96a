#pragma once

#include <cstdint>
#include <string>

#include "lpf/point_cloud.hpp"

namespace lpf {

enum class ShapeKind {
  kPlane,         // square patch, side 6, z = 0
  kCube,          // hollow cube surface, side 5.24 (bbox diagonal 9.08)
  kCubeWithCurve, // cube side 4.4 crossed by a sine-wave curve (diag ~8.8)
  kSphereCurveNet,// sphere R=12.4 inside a circle net at R=13.65 (diag 47.29)
  kSinusoid,      // z = 0.8*sin(2*pi*x/4) over an 8x8 patch
};

ShapeKind shape_kind_from_string(const std::string& name);
std::string to_string(ShapeKind kind);

struct SynthResult {
  PointCloud noisy;
  PointCloud ground_truth;
};

/// Samples n points on the requested shape and adds isotropic Gaussian noise
/// of the given standard deviation per coordinate to the noisy copy.
SynthResult synth_shape(ShapeKind kind, std::size_t n, double noise_sigma,
                        std::uint64_t rng_seed);

/// Analytic distances used by tests and by the cube/curve code labelling.
namespace shapes {
double plane_distance(const Vec3& p);
double cube_distance(const Vec3& p, double side);
double cube_with_curve_distance(const Vec3& p);       // min(cube, curve)
double cube_with_curve_curve_distance(const Vec3& p); // curve only
double cube_with_curve_edge_distance(const Vec3& p);  // nearest cube edge
double sphere_curve_net_distance(const Vec3& p);
double sinusoid_distance(const Vec3& p);

constexpr double kPlaneSide = 6.0;
constexpr double kCubeSide = 5.24;
constexpr double kCubeCurveSide = 4.4;
constexpr double kSphereRadius = 12.4;
constexpr double kNetRadius = 13.65;
} // namespace shapes

} // namespace lpf
