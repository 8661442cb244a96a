/* C API for the local probing field shape analysis library.
 *
 * All entry points return an lpf_status (LPF_OK on success); the most recent
 * failure message for the calling thread is available via lpf_last_error().
 * Objects are opaque handles, released with the matching _destroy call.
 */
#ifndef LPF_LPF_H
#define LPF_LPF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lpf_status {
  LPF_OK = 0,
  LPF_ERR_INVALID_ARGUMENT = 1,
  LPF_ERR_IO = 2,
  LPF_ERR_FORMAT = 3,
  LPF_ERR_VERSION = 4,
  LPF_ERR_NUMERIC = 5,
  LPF_ERR_UNKNOWN = 6
} lpf_status;

typedef struct lpf_cloud lpf_cloud;
typedef struct lpf_config lpf_config;
typedef struct lpf_state lpf_state;

const char* lpf_last_error(void);

/* ---- point clouds ---- */

lpf_status lpf_cloud_create(const double* xyz, size_t count, lpf_cloud** out);
lpf_status lpf_cloud_load(const char* path, lpf_cloud** out);
lpf_status lpf_cloud_save(const lpf_cloud* cloud, const char* path);
size_t lpf_cloud_size(const lpf_cloud* cloud);
lpf_status lpf_cloud_points(const lpf_cloud* cloud, double* out_xyz);
double lpf_cloud_bbox_diagonal(const lpf_cloud* cloud);
void lpf_cloud_destroy(lpf_cloud* cloud);

/* kind: "plane", "cube", "cube_with_curve", "sphere_curve_net", "sinusoid" */
lpf_status lpf_synth(const char* kind, size_t n, double noise_sigma,
                     uint64_t seed, lpf_cloud** noisy, lpf_cloud** ground_truth);

/* ---- configuration ----
 * Keys (all doubles; counts are rounded): "radius", "grid_n", "random_m",
 * "pattern_random" (0/1), "atoms", "lambda", "tau_p", "target_radius_factor",
 * "seed_rejection", "seed_stride" (0 = poisson seeding, k >= 1 = one seed per
 * k-th point), "outer_iters", "dict_iters", "pose_max_iter", "pose_tol",
 * "seed", "threads", "merge_radius", "gamma", "rounds", "stop_tol".
 * Negative values keep the automatic derivation. */

lpf_config* lpf_config_create(void);
lpf_status lpf_config_set(lpf_config* config, const char* key, double value);
lpf_status lpf_config_get(const lpf_config* config, const char* key, double* out);
/* Fill every automatic field from the cloud. */
lpf_status lpf_config_resolve(lpf_config* config, const lpf_cloud* cloud);
/* Resolved key=value lines; returns required buffer size (incl. NUL). */
size_t lpf_config_describe(const lpf_config* config, char* buffer, size_t size);
void lpf_config_destroy(lpf_config* config);

/* ---- analysis ---- */

lpf_status lpf_analyze(const lpf_cloud* cloud, const lpf_config* config,
                       lpf_state** out);
lpf_status lpf_state_save(const lpf_state* state, const char* path);
lpf_status lpf_state_load(const char* path, lpf_state** out);
size_t lpf_state_lpf_count(const lpf_state* state);
size_t lpf_state_pattern_size(const lpf_state* state);
size_t lpf_state_atom_count(const lpf_state* state);
size_t lpf_state_energy_rows(const lpf_state* state);
/* 9 doubles per row: l2/l1/total after dictionary, pose, reprobe steps. */
lpf_status lpf_state_energy(const lpf_state* state, double* out);
void lpf_state_destroy(lpf_state* state);

/* ---- applications ---- */

lpf_status lpf_resample(const lpf_cloud* cloud, const lpf_config* config,
                        lpf_cloud** out);
lpf_status lpf_resample_from_state(const lpf_state* state, lpf_cloud** out);

/* reference may be NULL. Round statistics arrays (may be NULL) must hold
 * "rounds" entries; *rounds_done reports how many were filled. */
lpf_status lpf_denoise(const lpf_cloud* cloud, const lpf_config* config,
                       const lpf_cloud* reference, lpf_cloud** out,
                       double* round_displacement, double* round_data_term,
                       double* round_rmse, int* rounds_done);

/* ---- metrics ---- */

lpf_status lpf_rmse(const lpf_cloud* test, const lpf_cloud* reference,
                    int symmetric, double* out);
/* edges: bins+1 doubles, counts: bins uint64 */
lpf_status lpf_nn_histogram(const lpf_cloud* cloud, int bins, double* edges,
                            uint64_t* counts, double* mean, double* median);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LPF_LPF_H */
