#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lpf/sparse_coding.hpp"

using namespace lpf;

namespace {

double objective(const VecX& signal, const MatX& dict, const VecX& code, double lambda) {
  return (signal - dict * code).squaredNorm() + lambda * code.cwiseAbs().sum();
}

MatX random_dictionary(int dim, int atoms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  MatX d(dim, atoms);
  for (int k = 0; k < atoms; ++k) {
    for (int r = 0; r < dim; ++r) d(r, k) = g(rng);
    d.col(k).normalize();
  }
  return d;
}

// exhaustive reference: stationary point for every support/sign combination
double brute_lasso_objective(const VecX& signal, const MatX& dict, double lambda) {
  int d = static_cast<int>(dict.cols());
  double best = signal.squaredNorm(); // alpha = 0
  std::vector<int> signs(static_cast<std::size_t>(d));
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
      MatX gram = ds.transpose() * ds;
      Eigen::FullPivLU<MatX> lu(gram);
      if (!lu.isInvertible()) continue;
      VecX alpha_s = lu.solve(ds.transpose() * signal - 0.5 * lambda * sigma);
      VecX code = VecX::Zero(d);
      for (int i = 0; i < s; ++i) code[support[static_cast<std::size_t>(i)]] = alpha_s[i];
      best = std::min(best, objective(signal, dict, code, lambda));
    }
  }
  return best;
}

} // namespace

TEST_CASE("lasso of a zero signal is zero") {
  MatX dict = random_dictionary(8, 4, 1);
  VecX code = lasso_code(VecX::Zero(8), dict, 0.3);
  CHECK(code.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("lasso dead zone: large lambda forces alpha = 0") {
  MatX dict = random_dictionary(10, 5, 2);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  VecX signal(10);
  for (int i = 0; i < 10; ++i) signal[i] = g(rng);
  double kill = 2.0 * (dict.transpose() * signal).cwiseAbs().maxCoeff();
  VecX code = lasso_code(signal, dict, kill * 1.000001);
  CHECK(code.cwiseAbs().maxCoeff() == 0.0);
  // just below the threshold at least one coefficient activates
  VecX active = lasso_code(signal, dict, kill * 0.98);
  CHECK(active.cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("lasso matches exhaustive support enumeration") {
  std::mt19937_64 rng(44);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> ul(0.01, 0.8);
  for (int trial = 0; trial < 40; ++trial) {
    int dim = 6 + trial % 7; // up to 12
    int atoms = 2 + trial % 4;
    MatX dict = random_dictionary(dim, atoms, 100 + static_cast<std::uint64_t>(trial));
    VecX signal(dim);
    for (int i = 0; i < dim; ++i) signal[i] = g(rng);
    double lambda = ul(rng);
    VecX code = lasso_code(signal, dict, lambda);
    double mine = objective(signal, dict, code, lambda);
    double best = brute_lasso_objective(signal, dict, lambda);
    CHECK(mine <= best + 1e-6);
    CHECK(lasso_certificate_violation(signal, dict, code, lambda) <= 1e-6);
  }
}

TEST_CASE("lasso rejects non-finite input") {
  MatX dict = random_dictionary(4, 2, 9);
  VecX bad(4);
  bad << 1.0, std::nan(""), 0.0, 0.0;
  CHECK_THROWS_AS(lasso_code(bad, dict, 0.1), std::invalid_argument);
}

TEST_CASE("dictionary_update: all-zero codes only re-seed atoms") {
  MatX signals = random_dictionary(6, 3, 7) * 2.0;
  MatX dict = random_dictionary(6, 2, 8);
  MatX codes = MatX::Zero(2, 3);
  MatX before = dict;
  dictionary_update(signals, codes, dict, 0.1);
  CHECK(codes.cwiseAbs().maxCoeff() == 0.0);
  // every atom is re-seeded to the worst-residual signal, normalized
  for (int k = 0; k < 2; ++k) CHECK(dict.col(k).norm() == doctest::Approx(1.0));
}

TEST_CASE("dictionary_update: rank-1 case gives atom V/|V| with alpha = |V|") {
  VecX signal(5);
  signal << 3, 0, 4, 0, 0; // norm 5
  MatX signals = signal;
  MatX dict(5, 1);
  dict << 0, 1, 0, 0, 0;
  MatX codes = MatX::Ones(1, 1);
  dictionary_update(signals, codes, dict, 0.01);
  CHECK((dict.col(0) - signal / 5.0).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(codes(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("dictionary_update never raises the objective") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    int dim = 8, atoms = 4, n = 12;
    MatX signals(dim, n);
    for (int i = 0; i < dim * n; ++i) signals(i % dim, i / dim) = g(rng);
    MatX dict = random_dictionary(dim, atoms, 500 + static_cast<std::uint64_t>(trial));
    double lambda = 0.1 + 0.3 * (trial % 3);
    MatX codes = MatX::Zero(atoms, n);
    lasso_code_all(signals, dict, lambda, codes, 1);
    double before = sparse_objective(signals, dict, codes, lambda).total();
    dictionary_update(signals, codes, dict, lambda);
    double after = sparse_objective(signals, dict, codes, lambda).total();
    CHECK(after <= before * (1.0 + 1e-12) + 1e-12);
    for (int k = 0; k < atoms; ++k) CHECK(dict.col(k).norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("learn_dictionary: identical signals collapse onto one atom") {
  VecX base(6);
  base << 1, -2, 0, 3, 0, 1;
  MatX signals(6, 5);
  for (int j = 0; j < 5; ++j) signals.col(j) = base;
  DictionaryLearning dl = learn_dictionary(signals, 1, 0.01, 10, 42);
  double align = std::abs(dl.dictionary.col(0).dot(base.normalized()));
  CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
  // residual is the soft-threshold bias only: |V - d (d.V - lam/2)| per signal
  double residual = (signals - dl.dictionary * dl.codes).colwise().norm().maxCoeff();
  CHECK(residual <= 0.01);
}

TEST_CASE("learn_dictionary: d = N with tiny lambda reaches near-zero error") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  MatX signals(16, 6);
  for (int i = 0; i < 16 * 6; ++i) signals(i % 16, i / 16) = g(rng);
  DictionaryLearning dl = learn_dictionary(signals, 6, 1e-10, 60, 7);
  CHECK((signals - dl.dictionary * dl.codes).squaredNorm() < 1e-8);
}

TEST_CASE("learn_dictionary: two clusters map to two atoms") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 0.02);
  VecX a(8), b(8);
  a << 5, 0, 0, 0, 0, 0, 0, 5;
  b << 0, 5, -5, 0, 0, 0, 0, 0;
  MatX signals(8, 20);
  for (int j = 0; j < 20; ++j) {
    signals.col(j) = (j % 2 == 0 ? a : b);
    for (int i = 0; i < 8; ++i) signals(i, j) += g(rng);
  }
  DictionaryLearning dl = learn_dictionary(signals, 2, 0.05, 15, 3);
  // each signal codes dominantly on the atom matching its cluster
  for (int j = 0; j < 20; ++j) {
    VecX code = dl.codes.col(j).cwiseAbs();
    int dominant = code[0] > code[1] ? 0 : 1;
    int sibling = dl.codes.col((j + 2) % 20).cwiseAbs()[0] >
                          dl.codes.col((j + 2) % 20).cwiseAbs()[1]
                      ? 0
                      : 1;
    CHECK(dominant == sibling); // same-cluster signals share the dominant atom
    CHECK(code[dominant] > 4.0 * code[1 - dominant]);
  }
  CHECK(dl.objective.back() <= dl.objective.front() * (1.0 + 1e-12));
}

TEST_CASE("learn_dictionary objective is non-increasing") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g(0.0, 1.0);
  MatX signals(12, 30);
  for (int i = 0; i < 12 * 30; ++i) signals(i % 12, i / 12) = g(rng);
  DictionaryLearning dl = learn_dictionary(signals, 5, 0.15, 25, 23);
  for (std::size_t i = 1; i < dl.objective.size(); ++i)
    CHECK(dl.objective[i] <= dl.objective[i - 1] * (1.0 + 1e-12) + 1e-12);
}

TEST_CASE("learn_dictionary rejects more atoms than signals") {
  MatX signals = MatX::Ones(4, 3);
  CHECK_THROWS_AS(learn_dictionary(signals, 4, 0.1, 5, 1), std::invalid_argument);
}
