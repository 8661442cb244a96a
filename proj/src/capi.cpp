#include "lpf/lpf.h"

#include <cmath>
#include <cstring>
#include <string>

#include "lpf/analysis.hpp"
#include "lpf/cloud_io.hpp"
#include "lpf/denoise.hpp"
#include "lpf/errors.hpp"
#include "lpf/metrics.hpp"
#include "lpf/point_cloud.hpp"
#include "lpf/resample.hpp"
#include "lpf/snapshot.hpp"
#include "lpf/synth.hpp"

struct lpf_cloud {
  lpf::PointCloud cloud;
};

struct lpf_config {
  lpf::AnalysisConfig config;
};

struct lpf_state {
  lpf::AnalysisState state;
};

namespace {

thread_local std::string g_last_error;

lpf_status fail(lpf_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

template <typename Fn>
lpf_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const lpf::VersionError& e) {
    return fail(LPF_ERR_VERSION, e.what());
  } catch (const lpf::FormatError& e) {
    return fail(LPF_ERR_FORMAT, e.what());
  } catch (const lpf::IoError& e) {
    return fail(LPF_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LPF_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(LPF_ERR_NUMERIC, e.what());
  } catch (...) {
    return fail(LPF_ERR_UNKNOWN, "unknown error");
  }
}

lpf_status require(bool ok, const char* what) {
  return ok ? LPF_OK : fail(LPF_ERR_INVALID_ARGUMENT, what);
}

} // namespace

extern "C" {

const char* lpf_last_error(void) { return g_last_error.c_str(); }

lpf_status lpf_cloud_create(const double* xyz, size_t count, lpf_cloud** out) {
  if (require(xyz != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    std::vector<lpf::Vec3> pts(count);
    for (size_t i = 0; i < count; ++i)
      pts[i] = lpf::Vec3(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
    *out = new lpf_cloud{lpf::PointCloud(std::move(pts))};
    return LPF_OK;
  });
}

lpf_status lpf_cloud_load(const char* path, lpf_cloud** out) {
  if (require(path != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new lpf_cloud{lpf::read_cloud(path)};
    return LPF_OK;
  });
}

lpf_status lpf_cloud_save(const lpf_cloud* cloud, const char* path) {
  if (require(cloud != nullptr && path != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    lpf::write_cloud(cloud->cloud, path);
    return LPF_OK;
  });
}

size_t lpf_cloud_size(const lpf_cloud* cloud) { return cloud ? cloud->cloud.size() : 0; }

lpf_status lpf_cloud_points(const lpf_cloud* cloud, double* out_xyz) {
  if (require(cloud != nullptr && out_xyz != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  for (size_t i = 0; i < cloud->cloud.size(); ++i) {
    const lpf::Vec3& p = cloud->cloud.point(i);
    out_xyz[3 * i] = p.x();
    out_xyz[3 * i + 1] = p.y();
    out_xyz[3 * i + 2] = p.z();
  }
  return LPF_OK;
}

double lpf_cloud_bbox_diagonal(const lpf_cloud* cloud) {
  return cloud ? cloud->cloud.bbox_diagonal() : 0.0;
}

void lpf_cloud_destroy(lpf_cloud* cloud) { delete cloud; }

lpf_status lpf_synth(const char* kind, size_t n, double noise_sigma, uint64_t seed,
                     lpf_cloud** noisy, lpf_cloud** ground_truth) {
  if (require(kind != nullptr && noisy != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    lpf::SynthResult r = lpf::synth_shape(lpf::shape_kind_from_string(kind), n, noise_sigma, seed);
    *noisy = new lpf_cloud{std::move(r.noisy)};
    if (ground_truth) *ground_truth = new lpf_cloud{std::move(r.ground_truth)};
    return LPF_OK;
  });
}

lpf_config* lpf_config_create(void) { return new lpf_config{}; }

lpf_status lpf_config_set(lpf_config* config, const char* key, double value) {
  if (require(config != nullptr && key != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  lpf::AnalysisConfig& c = config->config;
  std::string k(key);
  auto as_int = [&] { return static_cast<int>(std::llround(value)); };
  if (k == "radius") c.radius = value;
  else if (k == "grid_n") c.grid_n = as_int();
  else if (k == "random_m") c.random_m = as_int();
  else if (k == "pattern_random") c.pattern = value != 0.0 ? lpf::PatternKind::kRandom : lpf::PatternKind::kGrid;
  else if (k == "atoms") c.atoms = as_int();
  else if (k == "lambda") c.lambda = value;
  else if (k == "tau_p") c.tau_p = value;
  else if (k == "target_radius_factor") c.target_radius_factor = value;
  else if (k == "seed_rejection") c.seed_rejection = value;
  else if (k == "seed_stride") {
    if (value <= 0.0) {
      c.seed_mode = lpf::SeedMode::kPoisson;
      c.lpf_stride = 1;
    } else {
      c.seed_mode = lpf::SeedMode::kStride;
      c.lpf_stride = as_int();
    }
  } else if (k == "outer_iters") c.outer_iters = as_int();
  else if (k == "dict_iters") c.dict_iters = as_int();
  else if (k == "pose_max_iter") c.pose_max_iter = as_int();
  else if (k == "pose_tol") c.pose_tol = value;
  else if (k == "seed") c.rng_seed = static_cast<std::uint64_t>(value);
  else if (k == "threads") c.threads = as_int();
  else if (k == "merge_radius") c.merge_radius = value;
  else if (k == "gamma") c.gamma = value;
  else if (k == "rounds") c.denoise_rounds = as_int();
  else if (k == "stop_tol") c.stop_tol = value;
  else return fail(LPF_ERR_INVALID_ARGUMENT, "unknown config key: " + k);
  return LPF_OK;
}

lpf_status lpf_config_get(const lpf_config* config, const char* key, double* out) {
  if (require(config != nullptr && key != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  const lpf::AnalysisConfig& c = config->config;
  std::string k(key);
  if (k == "radius") *out = c.radius;
  else if (k == "grid_n") *out = c.grid_n;
  else if (k == "random_m") *out = c.random_m;
  else if (k == "pattern_random") *out = c.pattern == lpf::PatternKind::kRandom ? 1.0 : 0.0;
  else if (k == "atoms") *out = c.atoms;
  else if (k == "lambda") *out = c.lambda;
  else if (k == "tau_p") *out = c.tau_p;
  else if (k == "target_radius_factor") *out = c.target_radius_factor;
  else if (k == "seed_rejection") *out = c.seed_rejection;
  else if (k == "seed_stride") *out = c.seed_mode == lpf::SeedMode::kStride ? c.lpf_stride : 0.0;
  else if (k == "outer_iters") *out = c.outer_iters;
  else if (k == "dict_iters") *out = c.dict_iters;
  else if (k == "pose_max_iter") *out = c.pose_max_iter;
  else if (k == "pose_tol") *out = c.pose_tol;
  else if (k == "seed") *out = static_cast<double>(c.rng_seed);
  else if (k == "threads") *out = c.threads;
  else if (k == "merge_radius") *out = c.merge_radius;
  else if (k == "gamma") *out = c.gamma;
  else if (k == "rounds") *out = c.denoise_rounds;
  else if (k == "stop_tol") *out = c.stop_tol;
  else return fail(LPF_ERR_INVALID_ARGUMENT, "unknown config key: " + k);
  return LPF_OK;
}

lpf_status lpf_config_resolve(lpf_config* config, const lpf_cloud* cloud) {
  if (require(config != nullptr && cloud != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    config->config = lpf::resolve_config(config->config, cloud->cloud);
    return LPF_OK;
  });
}

size_t lpf_config_describe(const lpf_config* config, char* buffer, size_t size) {
  if (!config) return 0;
  std::string text = lpf::describe_config(config->config);
  if (buffer && size > 0) {
    size_t n = std::min(size - 1, text.size());
    std::memcpy(buffer, text.data(), n);
    buffer[n] = '\0';
  }
  return text.size() + 1;
}

void lpf_config_destroy(lpf_config* config) { delete config; }

lpf_status lpf_analyze(const lpf_cloud* cloud, const lpf_config* config, lpf_state** out) {
  if (require(cloud != nullptr && config != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new lpf_state{lpf::analyze(cloud->cloud, config->config)};
    return LPF_OK;
  });
}

lpf_status lpf_state_save(const lpf_state* state, const char* path) {
  if (require(state != nullptr && path != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    lpf::save_snapshot(state->state, path);
    return LPF_OK;
  });
}

lpf_status lpf_state_load(const char* path, lpf_state** out) {
  if (require(path != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new lpf_state{lpf::load_snapshot(path)};
    return LPF_OK;
  });
}

size_t lpf_state_lpf_count(const lpf_state* state) {
  return state ? state->state.lpfs.size() : 0;
}

size_t lpf_state_pattern_size(const lpf_state* state) {
  return state ? static_cast<size_t>(state->state.pattern.size()) : 0;
}

size_t lpf_state_atom_count(const lpf_state* state) {
  return state ? static_cast<size_t>(state->state.dictionary.cols()) : 0;
}

size_t lpf_state_energy_rows(const lpf_state* state) {
  return state ? state->state.energy_log.size() : 0;
}

lpf_status lpf_state_energy(const lpf_state* state, double* out) {
  if (require(state != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  size_t i = 0;
  for (const lpf::EnergyLogEntry& e : state->state.energy_log) {
    for (const lpf::EnergyEntry* entry :
         {&e.after_dictionary, &e.after_pose, &e.after_reprobe}) {
      out[i++] = entry->l2;
      out[i++] = entry->l1;
      out[i++] = entry->total;
    }
  }
  return LPF_OK;
}

void lpf_state_destroy(lpf_state* state) { delete state; }

lpf_status lpf_resample(const lpf_cloud* cloud, const lpf_config* config, lpf_cloud** out) {
  if (require(cloud != nullptr && config != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    lpf::ResampleResult r = lpf::resample(cloud->cloud, config->config);
    *out = new lpf_cloud{std::move(r.points)};
    return LPF_OK;
  });
}

lpf_status lpf_resample_from_state(const lpf_state* state, lpf_cloud** out) {
  if (require(state != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    lpf::ResampleResult r = lpf::resample_from_state(state->state);
    *out = new lpf_cloud{std::move(r.points)};
    return LPF_OK;
  });
}

lpf_status lpf_denoise(const lpf_cloud* cloud, const lpf_config* config,
                       const lpf_cloud* reference, lpf_cloud** out,
                       double* round_displacement, double* round_data_term,
                       double* round_rmse, int* rounds_done) {
  if (require(cloud != nullptr && config != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    lpf::DenoiseResult r = lpf::denoise(cloud->cloud, config->config,
                                        reference ? &reference->cloud : nullptr);
    for (size_t i = 0; i < r.rounds.size(); ++i) {
      if (round_displacement) round_displacement[i] = r.rounds[i].mean_displacement;
      if (round_data_term) round_data_term[i] = r.rounds[i].data_term;
      if (round_rmse) round_rmse[i] = r.rounds[i].rmse;
    }
    if (rounds_done) *rounds_done = static_cast<int>(r.rounds.size());
    *out = new lpf_cloud{std::move(r.points)};
    return LPF_OK;
  });
}

lpf_status lpf_rmse(const lpf_cloud* test, const lpf_cloud* reference, int symmetric,
                    double* out) {
  if (require(test != nullptr && reference != nullptr && out != nullptr, "null argument") != LPF_OK)
    return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = symmetric ? lpf::symmetric_rmse(test->cloud, reference->cloud)
                     : lpf::rmse(test->cloud, reference->cloud);
    return LPF_OK;
  });
}

lpf_status lpf_nn_histogram(const lpf_cloud* cloud, int bins, double* edges,
                            uint64_t* counts, double* mean, double* median) {
  if (require(cloud != nullptr, "null argument") != LPF_OK) return LPF_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    lpf::HistogramReport r = lpf::nn_histogram(cloud->cloud, bins);
    if (edges)
      for (size_t i = 0; i < r.edges.size(); ++i) edges[i] = r.edges[i];
    if (counts)
      for (size_t i = 0; i < r.counts.size(); ++i) counts[i] = r.counts[i];
    if (mean) *mean = r.mean;
    if (median) *median = r.median;
    return LPF_OK;
  });
}

} // extern "C"
