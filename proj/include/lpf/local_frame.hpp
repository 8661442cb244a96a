#pragma once

#include <span>

#include "lpf/geometry.hpp"

namespace lpf {

/// Position plus right-handed orthonormal axes (t1, t2, n) stored as the
/// columns of a rotation matrix. Local coordinates are (t1, t2, n)
/// components: world = origin + axes * local.
struct LocalFrame {
  Vec3 origin = Vec3::Zero();
  Mat3 axes = Mat3::Identity();

  Vec3 t1() const { return axes.col(0); }
  Vec3 t2() const { return axes.col(1); }
  Vec3 normal() const { return axes.col(2); }

  Vec3 to_world(const Vec3& local) const { return origin + axes * local; }
  Vec3 to_local(const Vec3& world) const { return axes.transpose() * (world - origin); }

  /// Max deviation from orthonormality/right-handedness.
  double orthonormality_error() const;

  /// Snap axes back to the nearest rotation (polar projection).
  void reorthonormalize();
};

/// Rotation + translation as used by the pose updates: applied to a field as
/// v' = R^T (u + v) - u - t, both expressed in the frame's local coordinates.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
};

struct RigidFit {
  RigidTransform transform;
  bool degenerate = false; // rank-deficient case; transform is the identity
};

/// Closed-form least squares for min_{R,t} sum_i |R^-1 source_i - t - dest_i|^2
/// over proper rotations (reflections corrected). Degenerate inputs (fewer
/// than 3 points or centered covariance of rank < 2) return the identity with
/// the degenerate flag set.
RigidFit fit_rigid(std::span<const Vec3> source, std::span<const Vec3> dest);

/// Objective of the fit at a given transform (for monotonicity checks).
double rigid_objective(std::span<const Vec3> source, std::span<const Vec3> dest,
                       const RigidTransform& transform);

} // namespace lpf
