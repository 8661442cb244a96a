#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lpf/analysis.hpp"
#include "lpf/synth.hpp"

using namespace lpf;

namespace {

AnalysisConfig sinusoid_config() {
  AnalysisConfig config;
  config.radius = 1.0;
  config.grid_n = 8;
  config.atoms = 1;
  config.rng_seed = 7;
  config.threads = 2;
  return config;
}

} // namespace

TEST_CASE("resolve_config derives lambda, tau_p, and the seed rejection radius") {
  SynthResult r = synth_shape(ShapeKind::kPlane, 2000, 0.0, 1);
  AnalysisConfig config;
  config.radius = 0.5;
  config.atoms = 8;
  AnalysisConfig small = resolve_config(config, r.noisy);
  CHECK(small.lambda == 0.05);
  config.atoms = 32;
  AnalysisConfig large = resolve_config(config, r.noisy);
  CHECK(large.lambda == 0.2);
  CHECK(large.tau_p > 0.0);
  CHECK(large.seed_rejection == doctest::Approx(0.25));
  CHECK(large.merge_radius >= large.tau_p);
  // explicit values survive resolution
  config.lambda = 0.33;
  config.tau_p = 0.01;
  AnalysisConfig pinned = resolve_config(config, r.noisy);
  CHECK(pinned.lambda == 0.33);
  CHECK(pinned.tau_p == 0.01);
  AnalysisConfig again = resolve_config(pinned, r.noisy);
  CHECK(again.lambda == 0.33); // idempotent
}

TEST_CASE("resolve_config validates") {
  SynthResult r = synth_shape(ShapeKind::kPlane, 100, 0.0, 2);
  AnalysisConfig config;
  config.radius = -1.0;
  CHECK_THROWS_AS(resolve_config(config, r.noisy), std::invalid_argument);
  config = AnalysisConfig{};
  config.atoms = 0;
  CHECK_THROWS_AS(resolve_config(config, r.noisy), std::invalid_argument);
  config = AnalysisConfig{};
  config.target_radius_factor = 0.9;
  CHECK_THROWS_AS(resolve_config(config, r.noisy), std::invalid_argument);
}

TEST_CASE("describe_config lists resolved values") {
  SynthResult r = synth_shape(ShapeKind::kPlane, 500, 0.0, 3);
  AnalysisConfig config = resolve_config(AnalysisConfig{}, r.noisy);
  std::string text = describe_config(config);
  CHECK(text.find("lambda=") != std::string::npos);
  CHECK(text.find("tau_p=") != std::string::npos);
  CHECK(text.find("merge_radius=") != std::string::npos);
  CHECK(text.find("rng_seed=42") != std::string::npos);
}

TEST_CASE("planar cloud produces near-zero signals and codes away from borders") {
  SynthResult r = synth_shape(ShapeKind::kPlane, 20000, 0.0, 4);
  AnalysisConfig config;
  config.radius = 1.0;
  config.grid_n = 16;
  config.atoms = 4;
  config.outer_iters = 3;
  config.rng_seed = 4;
  config.threads = 2;
  AnalysisState state = analyze(r.noisy, config);

  // fields whose target ball stays inside the patch see pure plane; border
  // fields legitimately encode the boundary
  const double margin = 1.3 * config.target_radius_factor * config.radius;
  int interior = 0;
  double max_code = 0.0, mean_signal = 0.0;
  for (std::size_t j = 0; j < state.lpf_count(); ++j) {
    const Vec3& s = state.lpfs[j].frame.origin;
    double border = std::min({s.x(), s.y(), shapes::kPlaneSide - s.x(),
                              shapes::kPlaneSide - s.y()});
    if (border < margin) continue;
    ++interior;
    max_code = std::max(max_code,
                        state.codes.col(static_cast<Eigen::Index>(j)).cwiseAbs().maxCoeff());
    mean_signal += state.signal(j).norm();
  }
  REQUIRE(interior > 3);
  mean_signal /= interior;
  CHECK(max_code < 0.05); // a plane is the zero signal
  // fields carry only the in-plane sampling jitter
  CHECK(mean_signal < 10.0 * state.config.tau_p * std::sqrt(state.pattern.size()));
}

TEST_CASE("every input point is covered by some target area") {
  SynthResult r = synth_shape(ShapeKind::kSinusoid, 6000, 0.0, 5);
  AnalysisConfig config = sinusoid_config();
  config.outer_iters = 1;
  AnalysisState state = analyze(r.noisy, config);
  std::vector<char> covered(r.noisy.size(), 0);
  for (const LocalProbingField& lpf : state.lpfs)
    for (int idx : lpf.target) covered[static_cast<std::size_t>(idx)] = 1;
  std::size_t miss = 0;
  for (char c : covered)
    if (!c) ++miss;
  CHECK(miss == 0);
}

TEST_CASE("frames stay orthonormal and targets never change") {
  SynthResult r = synth_shape(ShapeKind::kSinusoid, 5000, 0.0, 6);
  AnalysisConfig config = sinusoid_config();
  config.outer_iters = 4;
  AnalysisState state = analyze(r.noisy, config);
  for (const LocalProbingField& lpf : state.lpfs) {
    CHECK(lpf.frame.orthonormality_error() < 1e-9);
    CHECK(std::is_sorted(lpf.target.begin(), lpf.target.end()));
    CHECK(lpf.v.size() == static_cast<std::size_t>(state.pattern.size()));
    CHECK(lpf.valid.size() == lpf.v.size());
  }
}

TEST_CASE("energy log: totals are consistent and the loop makes progress") {
  SynthResult r = synth_shape(ShapeKind::kSinusoid, 8000, 0.0, 7);
  AnalysisConfig config = sinusoid_config();
  config.atoms = 2;
  config.outer_iters = 10;
  AnalysisState state = analyze(r.noisy, config);
  REQUIRE(state.energy_log.size() == 10);

  for (const EnergyLogEntry& e : state.energy_log) {
    for (const EnergyEntry* entry : {&e.after_dictionary, &e.after_pose, &e.after_reprobe}) {
      CHECK(entry->total ==
            doctest::Approx(entry->l2 + state.config.lambda * entry->l1).epsilon(1e-12));
    }
    // step 1 and step 2 never increase the objective within an iteration
    CHECK(e.after_pose.total <= e.after_dictionary.total * (1.0 + 1e-9) + 1e-9);
    CHECK(e.after_pose.l1 == e.after_dictionary.l1); // codes untouched by pose
  }
  for (std::size_t i = 1; i < state.energy_log.size(); ++i)
    CHECK(state.energy_log[i].after_dictionary.total <=
          state.energy_log[i - 1].after_reprobe.total * (1.0 + 1e-9) + 1e-9);
  CHECK(state.energy_log.back().after_reprobe.total <
        state.energy_log.front().after_reprobe.total);
}

TEST_CASE("sinusoid crest fields align under a single atom") {
  SynthResult r = synth_shape(ShapeKind::kSinusoid, 20000, 0.0, 8);
  AnalysisConfig config = sinusoid_config();
  config.radius = 1.0;
  config.grid_n = 16;
  config.atoms = 1;
  config.outer_iters = 10;
  AnalysisState state = analyze(r.noisy, config);

  // seeds near crests of z = 0.8 sin(2 pi x / 4): x mod 4 ~ 1
  std::vector<const LocalProbingField*> crest;
  for (const LocalProbingField& lpf : state.lpfs) {
    double phase = std::fmod(lpf.frame.origin.x(), 4.0);
    if (std::abs(phase - 1.0) < 0.15) crest.push_back(&lpf);
  }
  REQUIRE(crest.size() >= 4);
  // orientations agree up to the ridge signal's mirror symmetry (the +-n
  // classes code as +-alpha on the single atom and fit equally well)
  int aligned = 0, total = 0;
  for (std::size_t a = 0; a < crest.size(); ++a)
    for (std::size_t b = a + 1; b < crest.size(); ++b) {
      ++total;
      if (std::abs(crest[a]->frame.normal().dot(crest[b]->frame.normal())) > 0.9) ++aligned;
    }
  CHECK(static_cast<double>(aligned) / total >= 0.9);
}

TEST_CASE("analyze validates inputs") {
  PointCloud empty;
  CHECK_THROWS_AS(analyze(empty, AnalysisConfig{}), std::invalid_argument);
  SynthResult r = synth_shape(ShapeKind::kPlane, 50, 0.0, 9);
  AnalysisConfig config;
  config.atoms = 10000; // more atoms than probing fields
  CHECK_THROWS_AS(analyze(r.noisy, config), std::invalid_argument);
}
