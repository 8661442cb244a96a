#include "lpf/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "lpf/errors.hpp"

namespace lpf {

namespace {

constexpr char kMagic[8] = {'L', 'P', 'F', 'S', 'N', 'A', 'P', '\0'};

// writers: explicit field-by-field little-endian encoding (host is assumed
// little-endian; struct dumps would leak padding and break byte-identity)

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}
void put_vec3(std::ostream& out, const Vec3& v) {
  put_f64(out, v.x());
  put_f64(out, v.y());
  put_f64(out, v.z());
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw FormatError("snapshot: truncated file");
  return v;
}
std::int32_t get_i32(std::istream& in) {
  std::int32_t v;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw FormatError("snapshot: truncated file");
  return v;
}
double get_f64(std::istream& in) {
  double v;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw FormatError("snapshot: truncated file");
  return v;
}
Vec3 get_vec3(std::istream& in) {
  double x = get_f64(in), y = get_f64(in), z = get_f64(in);
  return Vec3(x, y, z);
}

void put_config(std::ostream& out, const AnalysisConfig& c) {
  put_f64(out, c.radius);
  put_i32(out, c.pattern == PatternKind::kGrid ? 0 : 1);
  put_i32(out, c.grid_n);
  put_i32(out, c.random_m);
  put_i32(out, c.atoms);
  put_f64(out, c.lambda);
  put_f64(out, c.tau_p);
  put_f64(out, c.target_radius_factor);
  put_f64(out, c.seed_rejection);
  put_i32(out, c.seed_mode == SeedMode::kPoisson ? 0 : 1);
  put_i32(out, c.lpf_stride);
  put_i32(out, c.outer_iters);
  put_i32(out, c.dict_iters);
  put_i32(out, c.pose_max_iter);
  put_f64(out, c.pose_tol);
  put_u64(out, c.rng_seed);
  put_i32(out, c.threads);
  put_f64(out, c.merge_radius);
  put_f64(out, c.gamma);
  put_i32(out, c.denoise_rounds);
  put_f64(out, c.stop_tol);
}

AnalysisConfig get_config(std::istream& in) {
  AnalysisConfig c;
  c.radius = get_f64(in);
  c.pattern = get_i32(in) == 0 ? PatternKind::kGrid : PatternKind::kRandom;
  c.grid_n = get_i32(in);
  c.random_m = get_i32(in);
  c.atoms = get_i32(in);
  c.lambda = get_f64(in);
  c.tau_p = get_f64(in);
  c.target_radius_factor = get_f64(in);
  c.seed_rejection = get_f64(in);
  c.seed_mode = get_i32(in) == 0 ? SeedMode::kPoisson : SeedMode::kStride;
  c.lpf_stride = get_i32(in);
  c.outer_iters = get_i32(in);
  c.dict_iters = get_i32(in);
  c.pose_max_iter = get_i32(in);
  c.pose_tol = get_f64(in);
  c.rng_seed = get_u64(in);
  c.threads = get_i32(in);
  c.merge_radius = get_f64(in);
  c.gamma = get_f64(in);
  c.denoise_rounds = get_i32(in);
  c.stop_tol = get_f64(in);
  return c;
}

} // namespace

void save_snapshot(const AnalysisState& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  put_i32(out, kSnapshotVersion);
  put_config(out, state.config);

  put_f64(out, state.pattern.radius);
  put_f64(out, state.pattern.tau_s);
  put_u64(out, state.pattern.offsets.size());
  for (const Vec3& u : state.pattern.offsets) put_vec3(out, u);

  put_u64(out, state.lpfs.size());
  for (const LocalProbingField& lpf : state.lpfs) {
    put_vec3(out, lpf.frame.origin);
    for (int c = 0; c < 3; ++c) put_vec3(out, lpf.frame.axes.col(c));
    put_u64(out, lpf.target.size());
    for (int idx : lpf.target) put_i32(out, idx);
    put_u64(out, lpf.v.size());
    for (const Vec3& v : lpf.v) put_vec3(out, v);
    for (auto flag : lpf.valid) out.put(flag ? 1 : 0);
  }

  put_u64(out, static_cast<std::uint64_t>(state.dictionary.rows()));
  put_u64(out, static_cast<std::uint64_t>(state.dictionary.cols()));
  for (Eigen::Index k = 0; k < state.dictionary.cols(); ++k) // row-major atoms
    for (Eigen::Index r = 0; r < state.dictionary.rows(); ++r)
      put_f64(out, state.dictionary(r, k));

  // codes as sparse triplets
  std::uint64_t nnz = 0;
  for (Eigen::Index j = 0; j < state.codes.cols(); ++j)
    for (Eigen::Index k = 0; k < state.codes.rows(); ++k)
      if (state.codes(k, j) != 0.0) ++nnz;
  put_u64(out, static_cast<std::uint64_t>(state.codes.rows()));
  put_u64(out, static_cast<std::uint64_t>(state.codes.cols()));
  put_u64(out, nnz);
  for (Eigen::Index j = 0; j < state.codes.cols(); ++j)
    for (Eigen::Index k = 0; k < state.codes.rows(); ++k)
      if (state.codes(k, j) != 0.0) {
        put_i32(out, static_cast<std::int32_t>(j));
        put_i32(out, static_cast<std::int32_t>(k));
        put_f64(out, state.codes(k, j));
      }

  put_u64(out, state.energy_log.size());
  for (const EnergyLogEntry& e : state.energy_log) {
    for (const EnergyEntry* entry : {&e.after_dictionary, &e.after_pose, &e.after_reprobe}) {
      put_f64(out, entry->l2);
      put_f64(out, entry->l1);
      put_f64(out, entry->total);
    }
  }
  if (!out) throw IoError("write failed: " + path);
}

AnalysisState load_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw FormatError(path + ": not a snapshot file (bad magic)");
  std::int32_t version = get_i32(in);
  if (version != kSnapshotVersion) throw VersionError(version, kSnapshotVersion);

  AnalysisState state;
  state.config = get_config(in);

  state.pattern.radius = get_f64(in);
  state.pattern.tau_s = get_f64(in);
  std::uint64_t m = get_u64(in);
  state.pattern.offsets.resize(m);
  for (std::uint64_t i = 0; i < m; ++i) state.pattern.offsets[i] = get_vec3(in);

  std::uint64_t n = get_u64(in);
  state.lpfs.resize(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    LocalProbingField& lpf = state.lpfs[j];
    lpf.frame.origin = get_vec3(in);
    for (int c = 0; c < 3; ++c) lpf.frame.axes.col(c) = get_vec3(in);
    std::uint64_t t = get_u64(in);
    lpf.target.resize(t);
    for (std::uint64_t i = 0; i < t; ++i) lpf.target[i] = get_i32(in);
    std::uint64_t vm = get_u64(in);
    lpf.v.resize(vm);
    for (std::uint64_t i = 0; i < vm; ++i) lpf.v[i] = get_vec3(in);
    lpf.valid.resize(vm);
    for (std::uint64_t i = 0; i < vm; ++i) {
      int ch = in.get();
      if (ch < 0) throw FormatError("snapshot: truncated file");
      lpf.valid[i] = static_cast<std::uint8_t>(ch);
    }
  }

  std::uint64_t rows = get_u64(in), cols = get_u64(in);
  state.dictionary.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t k = 0; k < cols; ++k)
    for (std::uint64_t r = 0; r < rows; ++r)
      state.dictionary(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = get_f64(in);

  std::uint64_t code_rows = get_u64(in), code_cols = get_u64(in), nnz = get_u64(in);
  state.codes = MatX::Zero(static_cast<Eigen::Index>(code_rows),
                           static_cast<Eigen::Index>(code_cols));
  for (std::uint64_t e = 0; e < nnz; ++e) {
    std::int32_t j = get_i32(in), k = get_i32(in);
    double value = get_f64(in);
    if (j < 0 || k < 0 || j >= static_cast<std::int32_t>(code_cols) ||
        k >= static_cast<std::int32_t>(code_rows))
      throw FormatError("snapshot: code triplet out of range");
    state.codes(k, j) = value;
  }

  std::uint64_t log_rows = get_u64(in);
  state.energy_log.resize(log_rows);
  for (std::uint64_t i = 0; i < log_rows; ++i) {
    EnergyLogEntry& e = state.energy_log[i];
    for (EnergyEntry* entry : {&e.after_dictionary, &e.after_pose, &e.after_reprobe}) {
      entry->l2 = get_f64(in);
      entry->l1 = get_f64(in);
      entry->total = get_f64(in);
    }
  }
  return state;
}

} // namespace lpf
