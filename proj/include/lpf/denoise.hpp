#pragma once

#include <optional>
#include <vector>

#include "lpf/analysis.hpp"
#include "lpf/point_cloud.hpp"

namespace lpf {

/// Candidate position an LPF proposes for a query point: the reconstruction
/// at the valid pattern point whose in-plane projection is nearest to the
/// in-plane projection of q.
Vec3 propose_position(const Vec3& query, const LocalProbingField& lpf,
                      const Pattern& pattern, const VecX& vtilde);

/// Gaussian-weighted mean of the candidates, bandwidth tau_p:
/// w(q,p) = exp(-|p-q|^2 / (2 tau_p^2)). Empty candidates return q unchanged.
Vec3 weighted_consensus(const Vec3& query, const std::vector<Vec3>& candidates,
                        double tau_p);

/// (q + gamma * q_consensus) / (1 + gamma).
Vec3 blend(const Vec3& query, const Vec3& consensus, double gamma);

struct DenoiseRound {
  double mean_displacement = 0.0;
  double data_term = 0.0; // sum of squared NN distances to the input cloud
  double rmse = -1.0;     // vs reference, when given
};

struct DenoiseResult {
  PointCloud points;
  std::vector<DenoiseRound> rounds;
};

/// Alternates LPF analysis (one LPF per point, optionally strided, coverage
/// kept) with per-point consensus projection and blending, until the mean
/// displacement drops below stop_tol or denoise_rounds is reached. The point
/// count never changes. The dictionary is warm-started across rounds.
DenoiseResult denoise(const PointCloud& cloud, const AnalysisConfig& config,
                      const PointCloud* reference = nullptr);

} // namespace lpf
