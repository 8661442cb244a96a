// Command-line front end. Everything goes through the shared library's C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpf/lpf.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

struct CloudHandle {
  lpf_cloud* ptr = nullptr;
  CloudHandle() = default;
  CloudHandle(CloudHandle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  CloudHandle& operator=(CloudHandle&& other) noexcept {
    if (this != &other) {
      lpf_cloud_destroy(ptr);
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  CloudHandle(const CloudHandle&) = delete;
  CloudHandle& operator=(const CloudHandle&) = delete;
  ~CloudHandle() { lpf_cloud_destroy(ptr); }
};

struct StateHandle {
  lpf_state* ptr = nullptr;
  StateHandle() = default;
  StateHandle(StateHandle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  StateHandle& operator=(StateHandle&& other) noexcept {
    if (this != &other) {
      lpf_state_destroy(ptr);
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  StateHandle(const StateHandle&) = delete;
  StateHandle& operator=(const StateHandle&) = delete;
  ~StateHandle() { lpf_state_destroy(ptr); }
};

struct ConfigHandle {
  lpf_config* ptr = nullptr;
  ConfigHandle() : ptr(lpf_config_create()) {}
  ConfigHandle(const ConfigHandle&) = delete;
  ConfigHandle& operator=(const ConfigHandle&) = delete;
  ~ConfigHandle() { lpf_config_destroy(ptr); }
};

[[noreturn]] void die(const std::string& context) {
  std::cerr << "error: " << context;
  const char* detail = lpf_last_error();
  if (detail && *detail) std::cerr << ": " << detail;
  std::cerr << "\n";
  std::exit(kExitData);
}

void check(lpf_status status, const std::string& context) {
  if (status != LPF_OK) die(context);
}

// common analysis options; negative values keep the automatic derivations
struct ConfigFlags {
  double radius = 1.0;
  std::string pattern = "grid";
  int grid_n = 16;
  int random_m = 193;
  int atoms = 16;
  double lambda = -1.0;
  double tau_p = -1.0;
  double seed_rejection = -1.0;
  double merge_radius = -1.0;
  int outer_iters = 10;
  int dict_iters = 10;
  std::uint64_t seed = 42;
  int threads = 0;
  int lpf_stride = 0; // 0 = poisson seeding

  void add_to(CLI::App* cmd, bool with_stride = false) {
    cmd->add_option("--radius", radius, "pattern radius r");
    cmd->add_option("--pattern", pattern, "pattern type: grid|random")
        ->check(CLI::IsMember({"grid", "random"}));
    cmd->add_option("--grid-n", grid_n, "grid resolution (grid pattern)");
    cmd->add_option("--random-m", random_m, "point count (random pattern)");
    cmd->add_option("--atoms", atoms, "dictionary size d");
    cmd->add_option("--lambda", lambda, "sparsity weight (auto when unset)");
    cmd->add_option("--tau-p", tau_p, "probing accuracy (auto: median NN distance)");
    cmd->add_option("--seed-rejection", seed_rejection, "seed rejection radius (auto: r/2)");
    cmd->add_option("--merge-radius", merge_radius,
                    "consolidation conflict radius (auto: max(tau_p, tau_s/2))");
    cmd->add_option("--iters", outer_iters, "outer analysis iterations");
    cmd->add_option("--dict-iters", dict_iters, "dictionary learning iterations");
    cmd->add_option("--seed", seed, "rng seed");
    cmd->add_option("--threads", threads, "worker thread cap (0 = auto)");
    if (with_stride)
      cmd->add_option("--lpf-stride", lpf_stride,
                      "seed every k-th point instead of every point");
  }

  void apply(lpf_config* config, bool stride_mode) const {
    check(lpf_config_set(config, "radius", radius), "config");
    check(lpf_config_set(config, "pattern_random", pattern == "random" ? 1 : 0), "config");
    check(lpf_config_set(config, "grid_n", grid_n), "config");
    check(lpf_config_set(config, "random_m", random_m), "config");
    check(lpf_config_set(config, "atoms", atoms), "config");
    check(lpf_config_set(config, "lambda", lambda), "config");
    check(lpf_config_set(config, "tau_p", tau_p), "config");
    check(lpf_config_set(config, "seed_rejection", seed_rejection), "config");
    check(lpf_config_set(config, "merge_radius", merge_radius), "config");
    check(lpf_config_set(config, "outer_iters", outer_iters), "config");
    check(lpf_config_set(config, "dict_iters", dict_iters), "config");
    check(lpf_config_set(config, "seed", static_cast<double>(seed)), "config");
    check(lpf_config_set(config, "threads", threads), "config");
    if (stride_mode)
      check(lpf_config_set(config, "seed_stride", lpf_stride < 1 ? 1 : lpf_stride), "config");
    else if (lpf_stride > 0)
      check(lpf_config_set(config, "seed_stride", lpf_stride), "config");
  }
};

CloudHandle load_cloud(const std::string& path) {
  CloudHandle cloud;
  check(lpf_cloud_load(path.c_str(), &cloud.ptr), "reading " + path);
  return cloud;
}

void save_cloud(const lpf_cloud* cloud, const std::string& path) {
  check(lpf_cloud_save(cloud, path.c_str()), "writing " + path);
}

void log_resolved_config(lpf_config* config, const lpf_cloud* cloud) {
  check(lpf_config_resolve(config, cloud), "resolving config");
  std::vector<char> buffer(lpf_config_describe(config, nullptr, 0));
  lpf_config_describe(config, buffer.data(), buffer.size());
  std::cerr << "resolved config:\n" << buffer.data();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) {
    std::cerr << "error: cannot write " << path << "\n";
    std::exit(kExitData);
  }
  out << text;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"local probing field shape analysis"};
  app.require_subcommand(1);
  // flag > config file > automatic derivation
  app.set_config("--config", "", "read options from an INI file (sections per subcommand)");

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "generate a synthetic point cloud");
  std::string synth_kind = "plane";
  std::size_t synth_n = 10000;
  double synth_noise = 0.0;
  std::uint64_t synth_seed = 42;
  std::string synth_out, synth_out_clean;
  synth->add_option("--kind", synth_kind,
                    "plane|cube|cube_with_curve|sphere_curve_net|sinusoid")
      ->required();
  synth->add_option("--n", synth_n, "point count")->required();
  synth->add_option("--noise", synth_noise, "gaussian noise sigma");
  synth->add_option("--seed", synth_seed, "rng seed");
  synth->add_option("--out", synth_out, "output cloud (.xyz/.ply)")->required();
  synth->add_option("--out-clean", synth_out_clean, "also write the noise-free cloud");

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "run the shape analysis, write a snapshot");
  std::string analyze_in, analyze_out;
  ConfigFlags analyze_flags;
  analyze->add_option("--in", analyze_in, "input cloud")->required();
  analyze->add_option("--out", analyze_out, "output snapshot")->required();
  analyze_flags.add_to(analyze, true);

  // ---- resample ----
  auto* resample = app.add_subcommand("resample", "consensus resampling of a cloud");
  std::string resample_in, resample_out, resample_state;
  ConfigFlags resample_flags;
  resample->add_option("--in", resample_in, "input cloud");
  resample->add_option("--out", resample_out, "output cloud")->required();
  resample->add_option("--state", resample_state, "reuse a precomputed snapshot");
  resample_flags.add_to(resample);

  // ---- denoise ----
  auto* denoise = app.add_subcommand("denoise", "consensus denoising of a cloud");
  std::string denoise_in, denoise_out, denoise_ref;
  double denoise_gamma = 0.5;
  int denoise_rounds = 5;
  ConfigFlags denoise_flags;
  denoise->add_option("--in", denoise_in, "input cloud")->required();
  denoise->add_option("--out", denoise_out, "output cloud")->required();
  denoise->add_option("--reference", denoise_ref, "noise-free reference for RMSE logging");
  denoise->add_option("--gamma", denoise_gamma, "blend rate");
  denoise->add_option("--rounds", denoise_rounds, "max denoising rounds");
  denoise_flags.add_to(denoise, true);

  // ---- metrics ----
  auto* metrics = app.add_subcommand("metrics", "quantitative reports");
  metrics->require_subcommand(1);
  auto* m_rmse = metrics->add_subcommand("rmse", "RMS distance test -> reference");
  std::string rmse_test, rmse_ref;
  bool rmse_symmetric = false;
  m_rmse->add_option("--test", rmse_test, "test cloud")->required();
  m_rmse->add_option("--reference", rmse_ref, "reference cloud")->required();
  m_rmse->add_flag("--symmetric", rmse_symmetric, "max of both directions");

  auto* m_hist = metrics->add_subcommand("hist", "nearest-neighbor distance histogram");
  std::string hist_in, hist_out;
  int hist_bins = 64;
  m_hist->add_option("--in", hist_in, "input cloud")->required();
  m_hist->add_option("--bins", hist_bins, "bin count");
  m_hist->add_option("--out", hist_out, "output csv (default stdout)");

  auto* m_energy = metrics->add_subcommand("energy", "per-iteration analysis energies");
  std::string energy_state, energy_out;
  bool energy_per_atom = false;
  m_energy->add_option("--state", energy_state, "analysis snapshot")->required();
  m_energy->add_option("--out", energy_out, "output csv (default stdout)");
  m_energy->add_flag("--per-atom", energy_per_atom, "divide by the dictionary size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e); // prints the message or help text
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (synth->parsed()) {
    CloudHandle noisy, clean;
    check(lpf_synth(synth_kind.c_str(), synth_n, synth_noise, synth_seed, &noisy.ptr,
                    &clean.ptr),
          "synth");
    save_cloud(noisy.ptr, synth_out);
    if (!synth_out_clean.empty()) save_cloud(clean.ptr, synth_out_clean);
    std::cerr << "synth: " << synth_kind << " n=" << synth_n << " noise=" << synth_noise
              << " seed=" << synth_seed << " -> " << synth_out << "\n";
    return kExitOk;
  }

  if (analyze->parsed()) {
    CloudHandle cloud = load_cloud(analyze_in);
    ConfigHandle config;
    analyze_flags.apply(config.ptr, false);
    log_resolved_config(config.ptr, cloud.ptr);
    StateHandle state;
    check(lpf_analyze(cloud.ptr, config.ptr, &state.ptr), "analyze");
    check(lpf_state_save(state.ptr, analyze_out.c_str()), "writing " + analyze_out);
    std::cerr << "analyze: " << lpf_state_lpf_count(state.ptr) << " probing fields, pattern M="
              << lpf_state_pattern_size(state.ptr) << " -> " << analyze_out << "\n";
    return kExitOk;
  }

  if (resample->parsed()) {
    CloudHandle out;
    if (!resample_state.empty()) {
      StateHandle state;
      check(lpf_state_load(resample_state.c_str(), &state.ptr), "reading " + resample_state);
      check(lpf_resample_from_state(state.ptr, &out.ptr), "resample");
    } else {
      if (resample_in.empty()) {
        std::cerr << "error: resample needs --in or --state\n";
        return kExitUsage;
      }
      CloudHandle cloud = load_cloud(resample_in);
      ConfigHandle config;
      resample_flags.apply(config.ptr, false);
      log_resolved_config(config.ptr, cloud.ptr);
      check(lpf_resample(cloud.ptr, config.ptr, &out.ptr), "resample");
    }
    save_cloud(out.ptr, resample_out);
    std::cerr << "resample: " << lpf_cloud_size(out.ptr) << " points -> " << resample_out
              << "\n";
    return kExitOk;
  }

  if (denoise->parsed()) {
    CloudHandle cloud = load_cloud(denoise_in);
    CloudHandle reference;
    if (!denoise_ref.empty()) reference = load_cloud(denoise_ref);
    ConfigHandle config;
    denoise_flags.apply(config.ptr, true);
    check(lpf_config_set(config.ptr, "gamma", denoise_gamma), "config");
    check(lpf_config_set(config.ptr, "rounds", denoise_rounds), "config");
    log_resolved_config(config.ptr, cloud.ptr);
    std::vector<double> disp(static_cast<std::size_t>(denoise_rounds)),
        data(static_cast<std::size_t>(denoise_rounds)),
        rm(static_cast<std::size_t>(denoise_rounds));
    int rounds_done = 0;
    CloudHandle out;
    check(lpf_denoise(cloud.ptr, config.ptr, reference.ptr, &out.ptr, disp.data(),
                      data.data(), rm.data(), &rounds_done),
          "denoise");
    for (int r = 0; r < rounds_done; ++r) {
      std::cerr << "round " << (r + 1) << ": mean displacement " << disp[static_cast<std::size_t>(r)]
                << ", data term " << data[static_cast<std::size_t>(r)];
      if (reference.ptr) std::cerr << ", rmse " << rm[static_cast<std::size_t>(r)];
      std::cerr << "\n";
    }
    save_cloud(out.ptr, denoise_out);
    std::cerr << "denoise: " << lpf_cloud_size(out.ptr) << " points -> " << denoise_out << "\n";
    return kExitOk;
  }

  if (m_rmse->parsed()) {
    CloudHandle test = load_cloud(rmse_test);
    CloudHandle reference = load_cloud(rmse_ref);
    double value = 0.0;
    check(lpf_rmse(test.ptr, reference.ptr, rmse_symmetric ? 1 : 0, &value), "rmse");
    std::printf("%.12g\n", value);
    return kExitOk;
  }

  if (m_hist->parsed()) {
    CloudHandle cloud = load_cloud(hist_in);
    std::vector<double> edges(static_cast<std::size_t>(hist_bins) + 1);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(hist_bins));
    double mean = 0.0, median = 0.0;
    check(lpf_nn_histogram(cloud.ptr, hist_bins, edges.data(), counts.data(), &mean, &median),
          "histogram");
    std::string csv = "bin_lo,bin_hi,count\n";
    char line[128];
    for (int b = 0; b < hist_bins; ++b) {
      std::snprintf(line, sizeof(line), "%.12g,%.12g,%" PRIu64 "\n",
                    edges[static_cast<std::size_t>(b)], edges[static_cast<std::size_t>(b) + 1],
                    counts[static_cast<std::size_t>(b)]);
      csv += line;
    }
    std::snprintf(line, sizeof(line), "# mean=%.12g median=%.12g\n", mean, median);
    csv += line;
    write_text(hist_out, csv);
    return kExitOk;
  }

  if (m_energy->parsed()) {
    StateHandle state;
    check(lpf_state_load(energy_state.c_str(), &state.ptr), "reading " + energy_state);
    std::size_t rows = lpf_state_energy_rows(state.ptr);
    std::vector<double> values(rows * 9);
    check(lpf_state_energy(state.ptr, values.data()), "energy");
    double scale = 1.0;
    if (energy_per_atom) {
      std::size_t atoms = lpf_state_atom_count(state.ptr);
      if (atoms > 0) scale = 1.0 / static_cast<double>(atoms);
    }
    std::string csv =
        "iter,l2_dict,l1_dict,total_dict,l2_pose,l1_pose,total_pose,"
        "l2_reprobe,l1_reprobe,total_reprobe\n";
    char line[512];
    for (std::size_t r = 0; r < rows; ++r) {
      std::snprintf(line, sizeof(line),
                    "%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", r + 1,
                    values[r * 9] * scale, values[r * 9 + 1] * scale, values[r * 9 + 2] * scale,
                    values[r * 9 + 3] * scale, values[r * 9 + 4] * scale,
                    values[r * 9 + 5] * scale, values[r * 9 + 6] * scale,
                    values[r * 9 + 7] * scale, values[r * 9 + 8] * scale);
      csv += line;
    }
    write_text(energy_out, csv);
    return kExitOk;
  }

  return kExitUsage;
}
