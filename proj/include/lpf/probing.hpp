#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpf/geometry.hpp"
#include "lpf/local_frame.hpp"
#include "lpf/pattern.hpp"
#include "lpf/point_cloud.hpp"
#include "lpf/spatial_index.hpp"

namespace lpf {

/// One local probing field: a frame, the field vectors v_i (stored in local
/// frame coordinates; world displacement is axes * v_i), and the fixed target
/// area it accounts for. Target indices never change after construction.
struct LocalProbingField {
  LocalFrame frame;
  std::vector<Vec3> v;          // length M, local coordinates
  std::vector<std::uint8_t> valid; // length M
  std::vector<int> target;      // indices into the analysis cloud

  int valid_count() const;
  /// World position probed by pattern point i: origin + axes*(u_i + v_i).
  Vec3 probed_point(const Pattern& pattern, int i) const;
};

enum class ProbeOperator {
  kOrthogonal, // target point whose in-plane projection is nearest
  kNearest,    // nearest target point in 3D
};

/// Cloud points within factor*r of the seed (closed ball).
std::vector<int> select_target(const SpatialIndex& index, const Vec3& seed,
                               double r, double factor = 1.1);

struct ProbeResult {
  std::vector<Vec3> v;             // local coordinates
  std::vector<std::uint8_t> valid; // 0 where the chosen point is farther than
                                   // max(2*tau_s, r) in-plane (v zeroed there)
};

/// Probes every pattern point against the target set.
///
/// kOrthogonal assigns pattern point p the target point whose projection onto
/// the pattern plane is nearest to p; ties break on smaller out-of-plane
/// offset, then lower point index. This keeps the field as orthogonal to the
/// pattern plane as the target sampling allows. kNearest is plain 3D nearest
/// (ties to lower index). Throws if the target is empty.
ProbeResult probe(ProbeOperator op, const LocalFrame& frame, const Pattern& pattern,
                  const PointCloud& cloud, std::span<const int> target);

/// Applies (R, t) from a local-coordinate rigid fit to the field:
///   v_i <- R^T (u_i + v_i) - u_i - t
///   axes <- axes * R,  origin <- origin + axes_old * R * t
/// World positions of the probed points are preserved exactly; the target is
/// untouched.
void apply_pose_update(LocalProbingField& lpf, const Pattern& pattern,
                       const RigidTransform& transform);

struct PoseOptStats {
  int iterations = 0;
  std::vector<double> energy; // sum |v_i|^2 after each probe, non-increasing
};

/// Alternates probing and rigid alignment of the pattern onto its probed
/// image until the energy sum |v_i|^2 stalls (relative decrease below tol) or
/// max_iter is reached. A step that would increase the energy is rolled back,
/// so the recorded energy sequence never increases.
PoseOptStats optimize_pose(LocalProbingField& lpf, const Pattern& pattern,
                           const PointCloud& cloud, ProbeOperator op,
                           int max_iter = 20, double tol = 1e-4);

/// Re-probes against the LPF's original target area only.
void reprobe(LocalProbingField& lpf, const Pattern& pattern, const PointCloud& cloud,
             ProbeOperator op = ProbeOperator::kOrthogonal);

/// Rigid fit between {u_i + v_i} and {u_i + vtilde_i} over the valid pattern
/// points (local coordinates). vtilde is a reconstructed signal of length 3M.
RigidFit pose_step(const LocalProbingField& lpf, const Pattern& pattern,
                   const VecX& vtilde);

} // namespace lpf
