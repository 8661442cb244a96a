#include "lpf/resample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>

namespace lpf {

namespace {

// flat grid hash over candidate positions, cell size = conflict radius
struct CellKey {
  long long x, y, z;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y && z == o.z; }
};

struct CellHash {
  std::size_t operator()(const CellKey& k) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (long long v : {k.x, k.y, k.z}) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

class PointHash {
public:
  explicit PointHash(double cell) : cell_(cell) {}

  void insert(int id, const Vec3& p) { map_[key(p)].push_back(id); }

  template <typename Fn>
  void for_each_near(const Vec3& p, Fn&& fn) const {
    CellKey c = key(p);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = map_.find(CellKey{c.x + dx, c.y + dy, c.z + dz});
          if (it == map_.end()) continue;
          for (int id : it->second) fn(id);
        }
  }

private:
  CellKey key(const Vec3& p) const {
    return CellKey{static_cast<long long>(std::floor(p.x() / cell_)),
                   static_cast<long long>(std::floor(p.y() / cell_)),
                   static_cast<long long>(std::floor(p.z() / cell_))};
  }
  double cell_;
  std::unordered_map<CellKey, std::vector<int>, CellHash> map_;
};

} // namespace

std::vector<CandidatePoint> reconstruct_candidates(const AnalysisState& state) {
  std::vector<CandidatePoint> candidates;
  const Pattern& pattern = state.pattern;
  for (std::size_t j = 0; j < state.lpfs.size(); ++j) {
    const LocalProbingField& lpf = state.lpfs[j];
    VecX vtilde = state.reconstructed(j);
    for (int i = 0; i < pattern.size(); ++i) {
      if (!lpf.valid[static_cast<std::size_t>(i)]) continue;
      Vec3 local = pattern.offsets[static_cast<std::size_t>(i)] +
                   vtilde.segment<3>(3 * static_cast<Eigen::Index>(i));
      candidates.push_back(CandidatePoint{lpf.frame.to_world(local), static_cast<int>(j), i});
    }
  }
  return candidates;
}

PointCloud consolidate(const std::vector<CandidatePoint>& candidates,
                       const AnalysisState& state, double conflict_radius,
                       ConsolidationTrace* trace) {
  if (conflict_radius <= 0.0)
    throw std::invalid_argument("consolidate: conflict radius must be positive");
  double r2 = conflict_radius * conflict_radius;
  double sphere_radius =
      state.config.target_radius_factor * state.config.radius;
  double sphere2 = sphere_radius * sphere_radius;

  auto in_target_sphere = [&](int lpf_idx, const Vec3& q) {
    const Vec3& s = state.lpfs[static_cast<std::size_t>(lpf_idx)].frame.origin;
    return (q - s).squaredNorm() <= sphere2;
  };
  // conflict: the candidate's source sphere contains q and the candidate
  // position is within the conflict radius of q
  auto conflicts = [&](const CandidatePoint& c, const Vec3& q) {
    return in_target_sphere(c.source_lpf, q) && (c.position - q).squaredNorm() <= r2;
  };

  PointHash cand_hash(conflict_radius);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    cand_hash.insert(static_cast<int>(i), candidates[i].position);

  PointHash out_hash(conflict_radius);
  std::vector<Vec3> outputs;
  std::vector<int> output_source; // lpf index of the seeding candidate
  std::vector<std::uint8_t> consumed(candidates.size(), 0);

  for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
    if (consumed[idx]) continue;
    const Vec3& q = candidates[idx].position;

    std::vector<int> zone;
    cand_hash.for_each_near(q, [&](int id) {
      if (!consumed[static_cast<std::size_t>(id)] &&
          conflicts(candidates[static_cast<std::size_t>(id)], q))
        zone.push_back(id);
    });
    std::sort(zone.begin(), zone.end()); // hash order is not deterministic

    Vec3 mean = Vec3::Zero();
    for (int id : zone) mean += candidates[static_cast<std::size_t>(id)].position;
    mean /= static_cast<double>(zone.size());

    for (int id : zone) consumed[static_cast<std::size_t>(id)] = 1;
    // nothing conflicting with the emitted point may be added later
    cand_hash.for_each_near(mean, [&](int id) {
      if (!consumed[static_cast<std::size_t>(id)] &&
          conflicts(candidates[static_cast<std::size_t>(id)], mean))
        consumed[static_cast<std::size_t>(id)] = 1;
    });

    // the mean itself may have drifted next to an earlier output; emitting it
    // would break the spacing guarantee, so it is dropped
    bool blocked = false;
    out_hash.for_each_near(mean, [&](int id) {
      if (blocked) return;
      if ((outputs[static_cast<std::size_t>(id)] - mean).squaredNorm() <= r2 &&
          (in_target_sphere(output_source[static_cast<std::size_t>(id)], mean) ||
           in_target_sphere(candidates[idx].source_lpf,
                            outputs[static_cast<std::size_t>(id)])))
        blocked = true;
    });
    if (blocked) continue;

    out_hash.insert(static_cast<int>(outputs.size()), mean);
    outputs.push_back(mean);
    output_source.push_back(candidates[idx].source_lpf);
    if (trace) trace->zones.push_back(std::move(zone));
  }
  return PointCloud(std::move(outputs));
}

ResampleResult resample(const PointCloud& cloud, const AnalysisConfig& config) {
  ResampleResult result;
  result.state = analyze(cloud, config);
  return resample_from_state(std::move(result.state));
}

ResampleResult resample_from_state(AnalysisState state) {
  ResampleResult result;
  result.conflict_radius = state.config.merge_radius;
  std::vector<CandidatePoint> candidates = reconstruct_candidates(state);
  result.points = consolidate(candidates, state, result.conflict_radius);
  result.state = std::move(state);
  return result;
}

} // namespace lpf
