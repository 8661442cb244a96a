#pragma once

#include <vector>

#include "lpf/analysis.hpp"
#include "lpf/point_cloud.hpp"

namespace lpf {

/// One reconstructed point: position from the reconstruction
/// p = origin + axes * (u_i + vtilde_i) of its source LPF.
struct CandidatePoint {
  Vec3 position;
  int source_lpf = 0;
  int pattern_index = 0;
};

/// Emits one candidate per valid pattern point per LPF, fields recomputed
/// from the dictionary decomposition (vtilde = D * code).
std::vector<CandidatePoint> reconstruct_candidates(const AnalysisState& state);

struct ConsolidationTrace {
  // zone[k] lists the candidate indices averaged into output point k
  std::vector<std::vector<int>> zones;
};

/// Greedy consensus sweep in (lpf, pattern) order. For each unconsumed
/// candidate: gather its influence zone (unconsumed candidates within
/// conflict_radius whose source target sphere contains the query), emit the
/// zone mean, consume the zone, and consume every candidate conflicting with
/// the emitted point. A mean that itself conflicts with an already emitted
/// point is dropped, so within mutual target spheres output points stay more
/// than conflict_radius apart.
PointCloud consolidate(const std::vector<CandidatePoint>& candidates,
                       const AnalysisState& state, double conflict_radius,
                       ConsolidationTrace* trace = nullptr);

struct ResampleResult {
  PointCloud points;
  AnalysisState state;
  double conflict_radius = 0.0;
};

/// analyze + reconstruct + consolidate. Output density follows the pattern
/// spacing tau_s.
ResampleResult resample(const PointCloud& cloud, const AnalysisConfig& config);

/// Same, reusing a finished analysis.
ResampleResult resample_from_state(AnalysisState state);

} // namespace lpf
