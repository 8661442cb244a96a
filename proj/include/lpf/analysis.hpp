#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpf/geometry.hpp"
#include "lpf/pattern.hpp"
#include "lpf/point_cloud.hpp"
#include "lpf/probing.hpp"
#include "lpf/sparse_coding.hpp"

namespace lpf {

enum class PatternKind { kGrid, kRandom };
enum class SeedMode { kPoisson, kStride };

/// Every tunable in one place. Negative scalar fields mean "derive from the
/// data": lambda from the atom count (0.2 if d >= 32 else 0.05), tau_p as the
/// median nearest-neighbor distance, seed rejection as r/2, merge radius as
/// max(tau_p, 0.42 * tau_s), stop tolerance as 0.01 * tau_p.
struct AnalysisConfig {
  double radius = 1.0;
  PatternKind pattern = PatternKind::kGrid;
  int grid_n = 16;
  int random_m = 193;
  int atoms = 16;
  double lambda = -1.0;
  double tau_p = -1.0;
  double target_radius_factor = 1.1;
  double seed_rejection = -1.0;
  SeedMode seed_mode = SeedMode::kPoisson;
  int lpf_stride = 1;
  int outer_iters = 10;
  int dict_iters = 10;
  int pose_max_iter = 20;
  double pose_tol = 1e-4;
  std::uint64_t rng_seed = 42;
  int threads = 0;
  // resampling
  double merge_radius = -1.0;
  // denoising
  double gamma = 0.5;
  int denoise_rounds = 5;
  double stop_tol = -1.0;
};

/// Fills every negative "auto" field from the cloud. Idempotent.
AnalysisConfig resolve_config(AnalysisConfig config, const PointCloud& cloud);

/// One line per key=value, in a fixed order, for reproducibility logging.
std::string describe_config(const AnalysisConfig& config);

struct EnergyEntry {
  double l2 = 0.0, l1 = 0.0, total = 0.0;
};

/// Objective recorded after each of the three steps of an outer iteration.
struct EnergyLogEntry {
  EnergyEntry after_dictionary;
  EnergyEntry after_pose;
  EnergyEntry after_reprobe;
};

struct AnalysisState {
  AnalysisConfig config; // fully resolved
  Pattern pattern;
  std::vector<LocalProbingField> lpfs;
  MatX dictionary; // 3M x d
  MatX codes;      // d x N
  std::vector<EnergyLogEntry> energy_log;

  int signal_dim() const { return 3 * pattern.size(); }
  std::size_t lpf_count() const { return lpfs.size(); }

  /// Zero-filled at invalid slots; local frame coordinates.
  VecX signal(std::size_t j) const;
  /// D * codes_j.
  VecX reconstructed(std::size_t j) const;
};

/// Flattens a field into a signal vector (3 components per pattern point,
/// invalid slots zeroed).
VecX flatten_field(const LocalProbingField& lpf);

/// Covers the cloud with LPFs, optimizes their initial poses, then iterates
/// dictionary learning / pose alignment / reprobing for outer_iters rounds.
/// Within one round the logged objective never increases across the first two
/// steps; the reprobe step may raise it. A warm dictionary of matching shape
/// replaces the random-signal initialization when given.
AnalysisState analyze(const PointCloud& cloud, const AnalysisConfig& config,
                      const MatX* warm_dictionary = nullptr);

} // namespace lpf
