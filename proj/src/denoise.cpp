#include "lpf/denoise.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lpf/parallel.hpp"
#include "lpf/seeding.hpp"
#include "lpf/spatial_index.hpp"

namespace lpf {

Vec3 propose_position(const Vec3& query, const LocalProbingField& lpf,
                      const Pattern& pattern, const VecX& vtilde) {
  Vec3 local = lpf.frame.to_local(query);
  double best = std::numeric_limits<double>::infinity();
  int best_i = -1;
  for (int i = 0; i < pattern.size(); ++i) {
    if (!lpf.valid[static_cast<std::size_t>(i)]) continue;
    const Vec3& u = pattern.offsets[static_cast<std::size_t>(i)];
    double da = u.x() - local.x();
    double db = u.y() - local.y();
    double d2 = da * da + db * db;
    if (d2 < best) {
      best = d2;
      best_i = i;
    }
  }
  if (best_i < 0) return query; // all pattern points masked
  Vec3 u_plus_v = pattern.offsets[static_cast<std::size_t>(best_i)] +
                  vtilde.segment<3>(3 * static_cast<Eigen::Index>(best_i));
  return lpf.frame.to_world(u_plus_v);
}

Vec3 weighted_consensus(const Vec3& query, const std::vector<Vec3>& candidates,
                        double tau_p) {
  if (candidates.empty()) return query;
  if (tau_p <= 0.0) throw std::invalid_argument("weighted_consensus: tau_p must be positive");
  double denom = 2.0 * tau_p * tau_p;
  Vec3 acc = Vec3::Zero();
  double wsum = 0.0;
  for (const Vec3& c : candidates) {
    double w = std::exp(-(c - query).squaredNorm() / denom);
    acc += w * c;
    wsum += w;
  }
  if (wsum <= 0.0) return query; // all candidates far beyond the bandwidth
  return acc / wsum;
}

Vec3 blend(const Vec3& query, const Vec3& consensus, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("blend: gamma must be positive");
  return (query + gamma * consensus) / (1.0 + gamma);
}

DenoiseResult denoise(const PointCloud& cloud, const AnalysisConfig& raw_config,
                      const PointCloud* reference) {
  if (cloud.empty()) throw std::invalid_argument("denoise: empty cloud");
  AnalysisConfig config = resolve_config(raw_config, cloud);
  config.seed_mode = SeedMode::kStride; // one field per point (or per k-th)
  if (config.lpf_stride < 1) config.lpf_stride = 1;

  SpatialIndex original_index(cloud);

  DenoiseResult result;
  result.points = cloud;
  double sphere_radius = config.target_radius_factor * config.radius;

  AnalysisState state;
  bool have_state = false;
  for (int round = 0; round < config.denoise_rounds; ++round) {
    // the dictionary is warm-started from the previous round
    AnalysisState next =
        analyze(result.points, config, have_state ? &state.dictionary : nullptr);
    state = std::move(next);
    have_state = true;

    // seed positions move during analysis; index them for the proposal pass
    std::vector<Vec3> seed_positions(state.lpfs.size());
    for (std::size_t j = 0; j < state.lpfs.size(); ++j)
      seed_positions[j] = state.lpfs[j].frame.origin;
    PointCloud seed_cloud{std::move(seed_positions)};
    SpatialIndex seed_index(seed_cloud);
    MatX reconstructed = state.dictionary * state.codes;

    std::vector<Vec3> updated(result.points.size());
    std::vector<double> displacement(result.points.size());
    parallel_for(result.points.size(), config.threads, [&](std::size_t qi) {
      const Vec3& q = result.points.point(qi);
      std::vector<int> nearby = seed_index.radius_indices(q, sphere_radius);
      std::vector<Vec3> proposals;
      proposals.reserve(nearby.size());
      for (int j : nearby) {
        const LocalProbingField& lpf = state.lpfs[static_cast<std::size_t>(j)];
        proposals.push_back(propose_position(
            q, lpf, state.pattern, reconstructed.col(static_cast<Eigen::Index>(j))));
      }
      Vec3 consensus = weighted_consensus(q, proposals, config.tau_p);
      Vec3 moved = blend(q, consensus, config.gamma);
      updated[qi] = moved;
      displacement[qi] = (moved - q).norm();
    });

    PointCloud next_points{std::move(updated)};
    DenoiseRound round_stats;
    for (double d : displacement) round_stats.mean_displacement += d;
    round_stats.mean_displacement /= static_cast<double>(next_points.size());
    for (std::size_t i = 0; i < next_points.size(); ++i) {
      int nn = original_index.nearest(next_points.point(i));
      round_stats.data_term +=
          (next_points.point(i) - cloud.point(static_cast<std::size_t>(nn))).squaredNorm();
    }
    if (reference) {
      SpatialIndex ref_index(*reference);
      double acc = 0.0;
      for (std::size_t i = 0; i < next_points.size(); ++i) {
        int nn = ref_index.nearest(next_points.point(i));
        acc += (next_points.point(i) - reference->point(static_cast<std::size_t>(nn)))
                   .squaredNorm();
      }
      round_stats.rmse = std::sqrt(acc / static_cast<double>(next_points.size()));
    }
    result.points = std::move(next_points);
    result.rounds.push_back(round_stats);
    if (round_stats.mean_displacement < config.stop_tol) break;
  }
  return result;
}

} // namespace lpf
