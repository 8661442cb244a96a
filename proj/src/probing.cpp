#include "lpf/probing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace lpf {

namespace {

// Grid over the target points projected into the pattern plane. Probing is
// the inner loop of the whole analysis; the grid keeps each query near O(1)
// while returning exactly the brute-force winner (ring expansion stops only
// once no closer cell can exist, so distance ties are still visited).
struct PlaneGrid {
  double cell = 1.0;
  double min_a = 0.0, min_b = 0.0;
  int na = 1, nb = 1;
  std::vector<std::vector<int>> bins; // indices into the local target arrays

  void build(const std::vector<double>& a, const std::vector<double>& b, double cell_size) {
    cell = cell_size;
    double max_a = a[0], max_b = b[0];
    min_a = a[0];
    min_b = b[0];
    for (std::size_t i = 1; i < a.size(); ++i) {
      min_a = std::min(min_a, a[i]);
      max_a = std::max(max_a, a[i]);
      min_b = std::min(min_b, b[i]);
      max_b = std::max(max_b, b[i]);
    }
    na = std::max(1, static_cast<int>((max_a - min_a) / cell) + 1);
    nb = std::max(1, static_cast<int>((max_b - min_b) / cell) + 1);
    bins.assign(static_cast<std::size_t>(na) * static_cast<std::size_t>(nb), {});
    for (std::size_t i = 0; i < a.size(); ++i)
      bins[bin_of(a[i], b[i])].push_back(static_cast<int>(i));
  }

  std::size_t bin_of(double a, double b) const {
    int ca = std::clamp(static_cast<int>((a - min_a) / cell), 0, na - 1);
    int cb = std::clamp(static_cast<int>((b - min_b) / cell), 0, nb - 1);
    return static_cast<std::size_t>(ca) * static_cast<std::size_t>(nb) +
           static_cast<std::size_t>(cb);
  }

  int cell_a(double a) const { return static_cast<int>(std::floor((a - min_a) / cell)); }
  int cell_b(double b) const { return static_cast<int>(std::floor((b - min_b) / cell)); }
};

struct Candidate {
  double plane_d2 = std::numeric_limits<double>::infinity();
  double key2 = std::numeric_limits<double>::infinity(); // ranking distance
  double abs_height = std::numeric_limits<double>::infinity();
  int local = -1;
};

// orthogonal probe ranks by in-plane distance, then |height|, then index;
// nearest probe ranks by 3D distance, then index
inline bool better(ProbeOperator op, const Candidate& x, const Candidate& y) {
  if (x.key2 != y.key2) return x.key2 < y.key2;
  if (op == ProbeOperator::kOrthogonal && x.abs_height != y.abs_height)
    return x.abs_height < y.abs_height;
  return x.local < y.local;
}

} // namespace

int LocalProbingField::valid_count() const {
  int c = 0;
  for (auto f : valid) c += f ? 1 : 0;
  return c;
}

Vec3 LocalProbingField::probed_point(const Pattern& pattern, int i) const {
  return frame.to_world(pattern.offsets[static_cast<std::size_t>(i)] +
                        v[static_cast<std::size_t>(i)]);
}

std::vector<int> select_target(const SpatialIndex& index, const Vec3& seed,
                               double r, double factor) {
  if (r <= 0.0) throw std::invalid_argument("select_target: radius must be positive");
  return index.radius_indices(seed, factor * r);
}

ProbeResult probe(ProbeOperator op, const LocalFrame& frame, const Pattern& pattern,
                  const PointCloud& cloud, std::span<const int> target) {
  if (target.empty()) throw std::invalid_argument("probe: empty target area");
  std::size_t m = pattern.offsets.size();
  std::size_t t = target.size();

  // local plane coordinates of the target, computed once per call
  std::vector<double> pa(t), pb(t), pc(t);
  for (std::size_t i = 0; i < t; ++i) {
    Vec3 local = frame.to_local(cloud.point(static_cast<std::size_t>(target[i])));
    pa[i] = local.x();
    pb[i] = local.y();
    pc[i] = local.z();
  }

  double cell = std::max(pattern.tau_s, 1e-12);
  PlaneGrid grid;
  grid.build(pa, pb, cell);

  ProbeResult result;
  result.v.assign(m, Vec3::Zero());
  result.valid.assign(m, 0);
  // mask only pattern points with no in-plane target within the pattern's own
  // scale: a tighter (tau_s-sized) cut would erase curve fields entirely,
  // whose targets are legitimately far in-plane for most pattern points
  double valid_limit = std::max(2.0 * pattern.tau_s, pattern.radius);

  int ring_max = grid.na + grid.nb + 2;
  for (std::size_t i = 0; i < m; ++i) {
    double qa = pattern.offsets[i].x();
    double qb = pattern.offsets[i].y();
    int ca = grid.cell_a(qa);
    int cb = grid.cell_b(qb);
    // rings may start far outside the grid when the pattern overhangs
    int extra = std::max({0, -ca, ca - (grid.na - 1), -cb, cb - (grid.nb - 1)});

    Candidate best;
    auto scan_bin = [&](int xa, int xb) {
      if (xa < 0 || xa >= grid.na || xb < 0 || xb >= grid.nb) return;
      const auto& bin = grid.bins[static_cast<std::size_t>(xa) * static_cast<std::size_t>(grid.nb) +
                                  static_cast<std::size_t>(xb)];
      for (int local : bin) {
        double da = pa[static_cast<std::size_t>(local)] - qa;
        double db = pb[static_cast<std::size_t>(local)] - qb;
        double dc = pc[static_cast<std::size_t>(local)];
        Candidate c;
        c.plane_d2 = da * da + db * db;
        c.abs_height = std::abs(dc);
        c.key2 = op == ProbeOperator::kOrthogonal ? c.plane_d2
                                                  : c.plane_d2 + dc * dc;
        c.local = local;
        if (better(op, c, best)) best = c;
      }
    };

    for (int ring = 0; ring <= ring_max + extra; ++ring) {
      if (best.local >= 0) {
        double reach = (ring - 1) * grid.cell; // closest a ring-'ring' point can be
        if (reach > 0.0 && reach * reach > best.key2) break;
      }
      if (ring == 0) {
        scan_bin(ca, cb);
        continue;
      }
      for (int xa = ca - ring; xa <= ca + ring; ++xa) {
        scan_bin(xa, cb - ring);
        scan_bin(xa, cb + ring);
      }
      for (int xb = cb - ring + 1; xb <= cb + ring - 1; ++xb) {
        scan_bin(ca - ring, xb);
        scan_bin(ca + ring, xb);
      }
    }

    int chosen = target[static_cast<std::size_t>(best.local)];
    Vec3 local = frame.to_local(cloud.point(static_cast<std::size_t>(chosen)));
    if (std::sqrt(best.plane_d2) <= valid_limit) {
      result.v[i] = local - pattern.offsets[i];
      result.valid[i] = 1;
    }
  }
  return result;
}

void apply_pose_update(LocalProbingField& lpf, const Pattern& pattern,
                       const RigidTransform& transform) {
  const Mat3& r = transform.rotation;
  const Vec3& t = transform.translation;
  for (std::size_t i = 0; i < lpf.v.size(); ++i) {
    if (!lpf.valid[i]) continue; // masked slots stay zero
    const Vec3& u = pattern.offsets[i];
    lpf.v[i] = r.transpose() * (u + lpf.v[i]) - u - t;
  }
  lpf.frame.origin += lpf.frame.axes * (r * t);
  lpf.frame.axes = lpf.frame.axes * r;
  lpf.frame.reorthonormalize();
}

namespace {

double field_energy(const LocalProbingField& lpf) {
  double e = 0.0;
  for (std::size_t i = 0; i < lpf.v.size(); ++i)
    if (lpf.valid[i]) e += lpf.v[i].squaredNorm();
  return e;
}

} // namespace

PoseOptStats optimize_pose(LocalProbingField& lpf, const Pattern& pattern,
                           const PointCloud& cloud, ProbeOperator op,
                           int max_iter, double tol) {
  PoseOptStats stats;
  ProbeResult pr = probe(op, lpf.frame, pattern, cloud, lpf.target);
  lpf.v = std::move(pr.v);
  lpf.valid = std::move(pr.valid);
  double energy = field_energy(lpf);
  stats.energy.push_back(energy);

  for (int iter = 0; iter < max_iter; ++iter) {
    std::vector<Vec3> source, dest;
    source.reserve(lpf.v.size());
    dest.reserve(lpf.v.size());
    for (std::size_t i = 0; i < lpf.v.size(); ++i) {
      if (!lpf.valid[i]) continue;
      source.push_back(pattern.offsets[i] + lpf.v[i]);
      dest.push_back(pattern.offsets[i]);
    }
    RigidFit fit = fit_rigid(source, dest);
    if (fit.degenerate) break;

    LocalProbingField candidate = lpf;
    apply_pose_update(candidate, pattern, fit.transform);
    ProbeResult re = probe(op, candidate.frame, pattern, cloud, candidate.target);
    candidate.v = std::move(re.v);
    candidate.valid = std::move(re.valid);
    double new_energy = field_energy(candidate);
    if (new_energy > energy) break; // keep the best pose seen so far

    lpf = std::move(candidate);
    stats.energy.push_back(new_energy);
    ++stats.iterations;
    bool converged = (energy - new_energy) <= tol * energy;
    energy = new_energy;
    if (converged) break;
  }
  return stats;
}

void reprobe(LocalProbingField& lpf, const Pattern& pattern, const PointCloud& cloud,
             ProbeOperator op) {
  ProbeResult pr = probe(op, lpf.frame, pattern, cloud, lpf.target);
  lpf.v = std::move(pr.v);
  lpf.valid = std::move(pr.valid);
}

RigidFit pose_step(const LocalProbingField& lpf, const Pattern& pattern,
                   const VecX& vtilde) {
  if (vtilde.size() != 3 * static_cast<Eigen::Index>(lpf.v.size()))
    throw std::invalid_argument("pose_step: reconstructed signal has wrong length");
  std::vector<Vec3> source, dest;
  source.reserve(lpf.v.size());
  dest.reserve(lpf.v.size());
  for (std::size_t i = 0; i < lpf.v.size(); ++i) {
    if (!lpf.valid[i]) continue;
    const Vec3& u = pattern.offsets[i];
    source.push_back(u + lpf.v[i]);
    dest.push_back(u + vtilde.segment<3>(3 * static_cast<Eigen::Index>(i)));
  }
  return fit_rigid(source, dest);
}

} // namespace lpf
