#include "lpf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lpf/parallel.hpp"
#include "lpf/seeding.hpp"

namespace lpf {

AnalysisConfig resolve_config(AnalysisConfig config, const PointCloud& cloud) {
  if (config.radius <= 0.0) throw std::invalid_argument("config: radius must be positive");
  if (config.atoms < 1) throw std::invalid_argument("config: atoms must be >= 1");
  if (config.target_radius_factor < 1.0)
    throw std::invalid_argument("config: target_radius_factor must be >= 1");
  if (config.gamma <= 0.0) throw std::invalid_argument("config: gamma must be positive");
  if (config.outer_iters < 1 || config.dict_iters < 1 || config.denoise_rounds < 1)
    throw std::invalid_argument("config: iteration counts must be >= 1");
  if (config.lambda < 0.0) config.lambda = config.atoms >= 32 ? 0.2 : 0.05;
  if (config.tau_p < 0.0) config.tau_p = estimate_tau_p(cloud);
  if (config.seed_rejection < 0.0) config.seed_rejection = 0.5 * config.radius;
  double tau_s = config.pattern == PatternKind::kGrid
                     ? 2.0 * config.radius / config.grid_n
                     : spacing_for(config.radius, config.random_m);
  // consolidation keeps output points ~1.28x the conflict radius apart, so
  // 0.42 * tau_s puts the consolidated spacing just above half a pattern step
  if (config.merge_radius < 0.0) config.merge_radius = std::max(config.tau_p, 0.42 * tau_s);
  if (config.stop_tol < 0.0) config.stop_tol = 0.01 * config.tau_p;
  return config;
}

std::string describe_config(const AnalysisConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << "radius=" << c.radius << "\n";
  out << "pattern=" << (c.pattern == PatternKind::kGrid ? "grid" : "random") << "\n";
  out << "grid_n=" << c.grid_n << "\n";
  out << "random_m=" << c.random_m << "\n";
  out << "atoms=" << c.atoms << "\n";
  out << "lambda=" << c.lambda << "\n";
  out << "tau_p=" << c.tau_p << "\n";
  out << "target_radius_factor=" << c.target_radius_factor << "\n";
  out << "seed_rejection=" << c.seed_rejection << "\n";
  out << "seed_mode=" << (c.seed_mode == SeedMode::kPoisson ? "poisson" : "stride") << "\n";
  out << "lpf_stride=" << c.lpf_stride << "\n";
  out << "outer_iters=" << c.outer_iters << "\n";
  out << "dict_iters=" << c.dict_iters << "\n";
  out << "pose_max_iter=" << c.pose_max_iter << "\n";
  out << "pose_tol=" << c.pose_tol << "\n";
  out << "rng_seed=" << c.rng_seed << "\n";
  out << "threads=" << c.threads << "\n";
  out << "merge_radius=" << c.merge_radius << "\n";
  out << "gamma=" << c.gamma << "\n";
  out << "denoise_rounds=" << c.denoise_rounds << "\n";
  out << "stop_tol=" << c.stop_tol << "\n";
  return out.str();
}

VecX flatten_field(const LocalProbingField& lpf) {
  VecX signal = VecX::Zero(3 * static_cast<Eigen::Index>(lpf.v.size()));
  for (std::size_t i = 0; i < lpf.v.size(); ++i)
    if (lpf.valid[i])
      signal.segment<3>(3 * static_cast<Eigen::Index>(i)) = lpf.v[i];
  return signal;
}

VecX AnalysisState::signal(std::size_t j) const { return flatten_field(lpfs[j]); }

VecX AnalysisState::reconstructed(std::size_t j) const {
  return dictionary * codes.col(static_cast<Eigen::Index>(j));
}

namespace {

Pattern build_pattern(const AnalysisConfig& config) {
  return config.pattern == PatternKind::kGrid
             ? grid_pattern(config.grid_n, config.radius)
             : random_pattern(config.random_m, config.radius, config.rng_seed);
}

// Seeds with too small a target area cannot hold a field; drop them and let
// the coverage pass re-seed around whatever they left uncovered.
std::vector<LocalProbingField> build_lpfs(const SpatialIndex& index,
                                          const SeedSet& seeds,
                                          const AnalysisConfig& config) {
  std::vector<LocalProbingField> lpfs;
  lpfs.reserve(seeds.seeds.size());
  for (const Seed& seed : seeds.seeds) {
    std::vector<int> target =
        select_target(index, seed.position, config.radius, config.target_radius_factor);
    if (target.size() < 3) continue;
    LocalProbingField lpf;
    lpf.frame.origin = seed.position;
    lpf.frame.axes = seed.frame;
    lpf.target = std::move(target);
    lpfs.push_back(std::move(lpf));
  }
  // canonical order: everything downstream becomes input-order independent
  std::sort(lpfs.begin(), lpfs.end(),
            [](const LocalProbingField& a, const LocalProbingField& b) {
              const Vec3& pa = a.frame.origin;
              const Vec3& pb = b.frame.origin;
              if (pa.x() != pb.x()) return pa.x() < pb.x();
              if (pa.y() != pb.y()) return pa.y() < pb.y();
              return pa.z() < pb.z();
            });
  return lpfs;
}

EnergyEntry energy_entry(const MatX& signals, const MatX& dictionary, const MatX& codes,
                         double lambda) {
  SparseObjective obj = sparse_objective(signals, dictionary, codes, lambda);
  return EnergyEntry{obj.l2, obj.l1, obj.total()};
}

} // namespace

AnalysisState analyze(const PointCloud& cloud, const AnalysisConfig& raw_config,
                      const MatX* warm_dictionary) {
  if (cloud.empty()) throw std::invalid_argument("analyze: empty cloud");
  AnalysisConfig config = resolve_config(raw_config, cloud);
  SpatialIndex index(cloud);

  AnalysisState state;
  state.config = config;
  state.pattern = build_pattern(config);

  double coverage_radius = config.target_radius_factor * config.radius;
  SeedSet seeds =
      config.seed_mode == SeedMode::kPoisson
          ? poisson_seed(cloud, index, config.seed_rejection, coverage_radius, config.rng_seed)
          : stride_seed(cloud, index, config.lpf_stride, coverage_radius, config.rng_seed);
  state.lpfs = build_lpfs(index, seeds, config);
  if (state.lpfs.empty()) throw std::runtime_error("analyze: no usable probing fields");

  std::size_t n = state.lpfs.size();
  if (static_cast<std::size_t>(config.atoms) > n)
    throw std::invalid_argument("analyze: more atoms than probing fields");

  parallel_for(n, config.threads, [&](std::size_t j) {
    optimize_pose(state.lpfs[j], state.pattern, cloud, ProbeOperator::kOrthogonal,
                  config.pose_max_iter, config.pose_tol);
  });

  Eigen::Index dim = 3 * static_cast<Eigen::Index>(state.pattern.size());
  MatX signals(dim, static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j)
    signals.col(static_cast<Eigen::Index>(j)) = flatten_field(state.lpfs[j]);

  if (warm_dictionary && warm_dictionary->rows() == dim &&
      warm_dictionary->cols() == config.atoms) {
    state.dictionary = *warm_dictionary;
    state.codes = MatX::Zero(config.atoms, static_cast<Eigen::Index>(n));
    for (int it = 0; it < config.dict_iters; ++it) {
      lasso_code_all(signals, state.dictionary, config.lambda, state.codes, config.threads);
      dictionary_update(signals, state.codes, state.dictionary, config.lambda);
    }
  } else {
    DictionaryLearning dl = learn_dictionary(signals, config.atoms, config.lambda,
                                             config.dict_iters, config.rng_seed, config.threads);
    state.dictionary = std::move(dl.dictionary);
    state.codes = std::move(dl.codes);
  }

  for (int outer = 0; outer < config.outer_iters; ++outer) {
    if (outer > 0) {
      // warm restart: keep the dictionary and codes from the previous round
      for (int it = 0; it < config.dict_iters; ++it) {
        lasso_code_all(signals, state.dictionary, config.lambda, state.codes, config.threads);
        dictionary_update(signals, state.codes, state.dictionary, config.lambda);
      }
    }
    EnergyLogEntry log;
    log.after_dictionary = energy_entry(signals, state.dictionary, state.codes, config.lambda);

    // pose alignment toward the dictionary reconstruction; the l1 term is
    // untouched and each accepted transform lowers that field's l2 share
    MatX reconstructed = state.dictionary * state.codes;
    parallel_for(n, config.threads, [&](std::size_t j) {
      LocalProbingField& lpf = state.lpfs[j];
      VecX vtilde = reconstructed.col(static_cast<Eigen::Index>(j));
      RigidFit fit = pose_step(lpf, state.pattern, vtilde);
      if (fit.degenerate) return;
      VecX before = flatten_field(lpf);
      LocalProbingField candidate = lpf;
      apply_pose_update(candidate, state.pattern, fit.transform);
      VecX after = flatten_field(candidate);
      if ((after - vtilde).squaredNorm() <= (before - vtilde).squaredNorm()) {
        lpf = std::move(candidate);
        signals.col(static_cast<Eigen::Index>(j)) = after;
      }
    });
    log.after_pose = energy_entry(signals, state.dictionary, state.codes, config.lambda);

    // re-probe against the original target areas
    parallel_for(n, config.threads, [&](std::size_t j) {
      reprobe(state.lpfs[j], state.pattern, cloud, ProbeOperator::kOrthogonal);
      signals.col(static_cast<Eigen::Index>(j)) = flatten_field(state.lpfs[j]);
    });
    log.after_reprobe = energy_entry(signals, state.dictionary, state.codes, config.lambda);
    state.energy_log.push_back(log);
  }
  return state;
}

} // namespace lpf
