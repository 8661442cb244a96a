// Acceptance suite: one checkable criterion per function, each printing a
// [PASS]/[FAIL] line with the measured values. Run with no arguments for the
// full battery or with criterion numbers to select.
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "lpf/analysis.hpp"
#include "lpf/cloud_io.hpp"
#include "lpf/denoise.hpp"
#include "lpf/local_frame.hpp"
#include "lpf/metrics.hpp"
#include "lpf/pattern.hpp"
#include "lpf/probing.hpp"
#include "lpf/resample.hpp"
#include "lpf/rng.hpp"
#include "lpf/snapshot.hpp"
#include "lpf/sparse_coding.hpp"
#include "lpf/synth.hpp"

using namespace lpf;

namespace {

int checks_failed = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  std::fflush(stdout);
  if (!ok) ++checks_failed;
}

std::string fmt(const char* pattern, ...) {
  char buffer[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buffer, sizeof(buffer), pattern, args);
  va_end(args);
  return buffer;
}

// ---- criterion 1: plane resampling densities and pattern counts ----

void criterion_1() {
  const double targets[3] = {0.075, 0.0320, 0.015};
  const int grids[3] = {16, 32, 64};
  const int counts[3] = {193, 793, 3205};

  SynthResult plane = synth_shape(ShapeKind::kPlane, 60000, 0.0, 42);
  for (int i = 0; i < 3; ++i) {
    Pattern pattern = grid_pattern(grids[i], 1.0);
    report(1, pattern.size() == counts[i],
           fmt("grid %dx%d -> M = %d (expect %d)", grids[i], grids[i], pattern.size(),
               counts[i]));

    AnalysisConfig config;
    config.radius = 1.0;
    config.grid_n = grids[i];
    config.atoms = 16;
    config.rng_seed = 42;
    ResampleResult result = resample(plane.noisy, config);
    HistogramReport hist = nn_histogram(result.points);
    double rel = hist.mean / targets[i] - 1.0;
    report(1, std::abs(rel) <= 0.15,
           fmt("grid %d mean NN distance %.4f vs %.4f (%+.1f%%)", grids[i], hist.mean,
               targets[i], 100.0 * rel));
  }
}

// ---- criterion 2: denoising ratios on the sphere + curve-net analog ----

void criterion_2() {
  // noise sigmas calibrated so the noisy RMSE lands near the three reference
  // levels (0.124 / 0.25 / 0.38 in shape units). Errors are measured against
  // a dense noise-free sample of the same generator: a same-size reference
  // floors the measurable RMSE at its own sampling gap (~0.4x spacing), which
  // would hide the denoising quality rather than measure it.
  const double sigmas[3] = {0.113, 0.230, 0.365};
  const double level[3] = {0.124, 0.25, 0.38};
  const double max_ratio[3] = {0.35, 0.45, 0.50};

  SynthResult reference = synth_shape(ShapeKind::kSphereCurveNet, 2000000, 0.0, 4242);

  double prev_denoised = 0.0;
  for (int i = 0; i < 3; ++i) {
    SynthResult net = synth_shape(ShapeKind::kSphereCurveNet, 100000, sigmas[i], 42);
    double noisy_rmse = rmse(net.noisy, reference.ground_truth);
    report(2, std::abs(noisy_rmse / level[i] - 1.0) < 0.12,
           fmt("level %d noisy RMSE %.4f (reference %.3f)", i + 1, noisy_rmse, level[i]));

    AnalysisConfig config;
    config.radius = 0.8;
    config.grid_n = 16;
    config.atoms = 16;
    config.rng_seed = 42;
    config.seed_mode = SeedMode::kStride;
    config.lpf_stride = 12;
    config.denoise_rounds = 12;
    config.outer_iters = 4;
    config.dict_iters = 5;
    DenoiseResult result = denoise(net.noisy, config);
    double denoised_rmse = rmse(result.points, reference.ground_truth);
    double ratio = denoised_rmse / noisy_rmse;
    report(2, ratio <= max_ratio[i],
           fmt("level %d denoised RMSE %.4f, ratio %.3f (limit %.2f)", i + 1, denoised_rmse,
               ratio, max_ratio[i]));
    if (i > 0)
      report(2, denoised_rmse > prev_denoised,
             fmt("level %d degrades gracefully (%.4f > %.4f)", i + 1, denoised_rmse,
                 prev_denoised));
    prev_denoised = denoised_rmse;
  }
}

// ---- criterion 3: cube-with-curve dimensionality with d = 3 ----

void criterion_3() {
  SynthResult shape = synth_shape(ShapeKind::kCubeWithCurve, 80000, 0.0, 42);
  AnalysisConfig config;
  config.radius = 0.4;
  config.grid_n = 16;
  config.atoms = 3;
  config.rng_seed = 42;
  AnalysisState state = analyze(shape.noisy, config);

  std::vector<double> magnitude(state.lpf_count());
  double max_mag = 0.0;
  for (std::size_t j = 0; j < state.lpf_count(); ++j) {
    magnitude[j] = state.codes.col(static_cast<Eigen::Index>(j)).cwiseAbs().sum();
    max_mag = std::max(max_mag, magnitude[j]);
  }
  report(3, max_mag > 0.0, fmt("max code magnitude %.3f", max_mag));

  // classify seeds analytically; faces keep a margin from edges and curve
  const double margin = 1.1 * config.radius + 0.05;
  std::vector<double> face_mags;
  std::size_t face_small = 0;
  std::vector<std::size_t> curve_idx;
  for (std::size_t j = 0; j < state.lpf_count(); ++j) {
    const Vec3& s = state.lpfs[j].frame.origin;
    double d_curve = shapes::cube_with_curve_curve_distance(s);
    double d_edge = shapes::cube_with_curve_edge_distance(s);
    if (d_curve > margin && d_edge > margin) {
      face_mags.push_back(magnitude[j]);
      if (magnitude[j] <= 0.05 * max_mag) ++face_small;
    } else if (d_curve < 0.5 * config.radius) {
      curve_idx.push_back(j);
    }
  }
  report(3, !face_mags.empty() && face_small == face_mags.size(),
         fmt("flat faces: %zu/%zu fields at <= 5%% of max code magnitude", face_small,
             face_mags.size()));

  std::sort(face_mags.begin(), face_mags.end());
  double face_median = face_mags.empty() ? 0.0 : face_mags[face_mags.size() / 2];
  std::size_t curve_above = 0;
  for (std::size_t j : curve_idx)
    if (magnitude[j] > face_median) ++curve_above;
  double fraction =
      curve_idx.empty() ? 0.0 : static_cast<double>(curve_above) / curve_idx.size();
  report(3, fraction >= 0.9,
         fmt("curve region: %zu/%zu fields above the face-level median (%.0f%%)", curve_above,
             curve_idx.size(), 100.0 * fraction));
}

// ---- criterion 4: energy behavior on sinusoid and cube ----

void criterion_4() {
  struct Case {
    ShapeKind kind;
    double radius;
    int atoms;
    std::size_t n;
  } cases[2] = {{ShapeKind::kSinusoid, 1.0, 4, 15000}, {ShapeKind::kCube, 0.5, 8, 30000}};

  for (const Case& c : cases) {
    SynthResult shape = synth_shape(c.kind, c.n, 0.0, 42);
    AnalysisConfig config;
    config.radius = c.radius;
    config.grid_n = 16;
    config.atoms = c.atoms;
    config.outer_iters = 10;
    config.rng_seed = 42;
    AnalysisState state = analyze(shape.noisy, config);
    const auto& log = state.energy_log;

    bool dict_monotone = true, pose_monotone = true;
    for (std::size_t k = 0; k < log.size(); ++k) {
      double before = k == 0 ? log[0].after_dictionary.total // no earlier reference
                             : log[k - 1].after_reprobe.total;
      if (log[k].after_dictionary.total > before * (1.0 + 1e-9) + 1e-9) dict_monotone = false;
      if (log[k].after_pose.total > log[k].after_dictionary.total * (1.0 + 1e-9) + 1e-9)
        pose_monotone = false;
    }
    double first = log.front().after_reprobe.total;
    double last = log.back().after_reprobe.total;
    report(4, last < first,
           fmt("%s: total %.4f (iter 1) -> %.4f (iter 10), strictly lower",
               to_string(c.kind).c_str(), first, last));
    report(4, dict_monotone,
           fmt("%s: dictionary step non-increasing at every iteration",
               to_string(c.kind).c_str()));
    report(4, pose_monotone,
           fmt("%s: pose step non-increasing at every iteration", to_string(c.kind).c_str()));
  }
}

// ---- criterion 5: sparse-coding oracle ----

double lasso_objective(const VecX& signal, const MatX& dict, const VecX& code, double lambda) {
  return (signal - dict * code).squaredNorm() + lambda * code.cwiseAbs().sum();
}

double brute_lasso(const VecX& signal, const MatX& dict, double lambda) {
  int d = static_cast<int>(dict.cols());
  double best = signal.squaredNorm();
  for (int mask = 1; mask < (1 << d); ++mask) {
    std::vector<int> support;
    for (int k = 0; k < d; ++k)
      if (mask & (1 << k)) support.push_back(k);
    int s = static_cast<int>(support.size());
    for (int signbits = 0; signbits < (1 << s); ++signbits) {
      MatX ds(dict.rows(), s);
      VecX sigma(s);
      for (int i = 0; i < s; ++i) {
        ds.col(i) = dict.col(support[static_cast<std::size_t>(i)]);
        sigma[i] = (signbits & (1 << i)) ? -1.0 : 1.0;
      }
      Eigen::FullPivLU<MatX> lu(ds.transpose() * ds);
      if (!lu.isInvertible()) continue;
      VecX alpha = lu.solve(ds.transpose() * signal - 0.5 * lambda * sigma);
      VecX code = VecX::Zero(d);
      for (int i = 0; i < s; ++i) code[support[static_cast<std::size_t>(i)]] = alpha[i];
      best = std::min(best, lasso_objective(signal, dict, code, lambda));
    }
  }
  return best;
}

void criterion_5() {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ul(0.02, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    int dim = 4 + trial % 9;   // 3M <= 12
    int atoms = 2 + trial % 4; // d <= 5
    MatX dict(dim, atoms);
    for (int k = 0; k < atoms; ++k) {
      for (int r = 0; r < dim; ++r) dict(r, k) = g(rng);
      dict.col(k).normalize();
    }
    VecX signal(dim);
    for (int r = 0; r < dim; ++r) signal[r] = g(rng);
    double lambda = ul(rng);
    VecX code = lasso_code(signal, dict, lambda);
    double gap = lasso_objective(signal, dict, code, lambda) - brute_lasso(signal, dict, lambda);
    worst = std::max(worst, gap);
  }
  report(5, worst <= 1e-6,
         fmt("200 instances: worst objective gap vs exhaustive enumeration %.2e", worst));
}

// ---- criterion 6: rigid-fit oracle ----

void criterion_6() {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rot_rng = make_rng(42, RngStream::kFrames);

  double worst_clean = 0.0, worst_noisy = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Vec3> source;
    for (int i = 0; i < 10; ++i) source.emplace_back(g(rng), g(rng), g(rng));
    Mat3 rotation = random_rotation(rot_rng);
    Vec3 translation(u(rng), u(rng), u(rng));
    bool noisy = trial % 2 == 1;
    std::vector<Vec3> dest;
    for (const Vec3& s : source) {
      Vec3 d = rotation.transpose() * s - translation;
      if (noisy) d += 1e-3 * Vec3(u(rng), u(rng), u(rng));
      dest.push_back(d);
    }
    RigidFit fit = fit_rigid(source, dest);
    if (fit.degenerate) {
      worst_clean = 1e9;
      continue;
    }
    double err = std::max((fit.transform.rotation - rotation).cwiseAbs().maxCoeff(),
                          (fit.transform.translation - translation).norm());
    (noisy ? worst_noisy : worst_clean) = std::max(noisy ? worst_noisy : worst_clean, err);
  }
  report(6, worst_clean < 1e-6,
         fmt("500 clean recoveries: worst transform error %.2e (< 1e-6)", worst_clean));
  report(6, worst_noisy < 1e-2,
         fmt("500 perturbed recoveries: worst transform error %.2e (< 1e-2)", worst_noisy));
}

// ---- criterion 7: pose optimization on the tilted plane ----

void criterion_7() {
  std::vector<Vec3> pts;
  for (double x = -1.2; x <= 1.2; x += 0.01)
    for (double y = -1.2; y <= 1.2; y += 0.01) pts.emplace_back(x, y, 0.0);
  PointCloud plane{std::move(pts)};

  Pattern pattern = grid_pattern(16, 0.5);
  LocalProbingField lpf;
  lpf.frame.axes = Eigen::AngleAxisd(20.0 * M_PI / 180.0, Vec3(1, 0, 0)).toRotationMatrix();
  lpf.target.resize(plane.size());
  for (std::size_t i = 0; i < plane.size(); ++i) lpf.target[i] = static_cast<int>(i);

  PoseOptStats stats = optimize_pose(lpf, pattern, plane, ProbeOperator::kOrthogonal, 20, 1e-6);
  double angle =
      std::acos(std::min(1.0, std::abs(lpf.frame.normal().z()))) * 180.0 / M_PI;
  report(7, angle < 2.0, fmt("final normal within %.3f degrees of the plane normal", angle));
  bool monotone = true;
  for (std::size_t k = 1; k < stats.energy.size(); ++k)
    if (stats.energy[k] > stats.energy[k - 1] * (1.0 + 1e-12)) monotone = false;
  report(7, monotone,
         fmt("energy non-increasing across %zu recorded probes", stats.energy.size()));
}

// ---- criterion 8: determinism across separate CLI runs ----

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void criterion_8() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "lpf_acceptance_det";
  fs::create_directories(dir);
  auto p = [&](const char* name) { return (dir / name).string(); };
  const std::string cli = LPF_CLI_PATH;
  auto run = [&](const std::string& args) {
    return std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  };

  bool ok = run("synth --kind sinusoid --n 8000 --noise 0.01 --seed 42 --out " +
                p("in.xyz")) == 0;
  std::string flags = " --radius 0.8 --grid-n 16 --atoms 8 --seed 42 --threads 2";
  ok = ok && run("analyze --in " + p("in.xyz") + " --out " + p("s1.lpfs") + flags) == 0;
  ok = ok && run("analyze --in " + p("in.xyz") + " --out " + p("s2.lpfs") + flags) == 0;
  std::string s1 = slurp(p("s1.lpfs"));
  report(8, ok && !s1.empty() && s1 == slurp(p("s2.lpfs")),
         "two analyze runs with the same seed give byte-identical snapshots");

  ok = run("resample --in " + p("in.xyz") + " --out " + p("r1.ply") + flags) == 0;
  ok = ok && run("resample --in " + p("in.xyz") + " --out " + p("r2.ply") + flags) == 0;
  std::string r1 = slurp(p("r1.ply"));
  report(8, ok && !r1.empty() && r1 == slurp(p("r2.ply")),
         "two resample runs with the same seed give byte-identical clouds");

  std::string dflags = flags + " --rounds 2 --lpf-stride 4";
  ok = run("denoise --in " + p("in.xyz") + " --out " + p("d1.ply") + dflags) == 0;
  ok = ok && run("denoise --in " + p("in.xyz") + " --out " + p("d2.ply") + dflags) == 0;
  std::string d1 = slurp(p("d1.ply"));
  report(8, ok && !d1.empty() && d1 == slurp(p("d2.ply")),
         "two denoise runs with the same seed give byte-identical clouds");
  fs::remove_all(dir);
}

} // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty()) selected = {1, 2, 3, 4, 5, 6, 7, 8};

  for (int criterion : selected) {
    switch (criterion) {
      case 1: criterion_1(); break;
      case 2: criterion_2(); break;
      case 3: criterion_3(); break;
      case 4: criterion_4(); break;
      case 5: criterion_5(); break;
      case 6: criterion_6(); break;
      case 7: criterion_7(); break;
      case 8: criterion_8(); break;
      default:
        std::fprintf(stderr, "unknown criterion %d\n", criterion);
        return 2;
    }
  }
  if (checks_failed > 0) {
    std::printf("%d acceptance check(s) failed\n", checks_failed);
    return 1;
  }
  std::printf("all selected acceptance criteria passed\n");
  return 0;
}
