#include "lpf/sparse_coding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "lpf/parallel.hpp"
#include "lpf/rng.hpp"

namespace lpf {

namespace {

constexpr double kCertificateTol = 1e-7;
constexpr int kMaxSweeps = 20000;

inline double soft_threshold(double value, double threshold) {
  if (value > threshold) return value - threshold;
  if (value < -threshold) return value + threshold;
  return 0.0;
}

// Coordinate descent on 2 * the gradient system of |V - Da|^2 + lambda |a|_1
// using the Gram matrix. Warm-started from `code`.
void lasso_cd(const VecX& dtv, const MatX& gram, double lambda, VecX& code) {
  Eigen::Index d = gram.rows();
  // gradient of the smooth part held as g = D^T V - G a
  VecX g = dtv - gram * code;
  double thresh = 0.5 * lambda;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double max_delta = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      double gkk = gram(k, k);
      if (gkk <= 0.0) { // zero atom: coefficient pinned at 0
        code[k] = 0.0;
        continue;
      }
      double old = code[k];
      double c = g[k] + gkk * old;
      double updated = soft_threshold(c, thresh) / gkk;
      if (updated != old) {
        g -= gram.col(k) * (updated - old);
        code[k] = updated;
        max_delta = std::max(max_delta, std::abs(updated - old));
      }
    }
    if (max_delta <= 1e-14) break;
    // certificate check every few sweeps; cheap relative to the sweeps
    if (sweep % 4 == 3) {
      double viol = 0.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        double corr = 2.0 * g[k];
        if (code[k] != 0.0) {
          viol = std::max(viol, std::abs(corr - lambda * (code[k] > 0.0 ? 1.0 : -1.0)));
        } else {
          viol = std::max(viol, std::max(0.0, std::abs(corr) - lambda));
        }
      }
      if (viol <= 0.5 * kCertificateTol) break;
    }
  }
}

} // namespace

SparseObjective sparse_objective(const MatX& signals, const MatX& dictionary,
                                 const MatX& codes, double lambda) {
  SparseObjective obj;
  obj.lambda = lambda;
  obj.l2 = (signals - dictionary * codes).squaredNorm();
  obj.l1 = codes.cwiseAbs().sum();
  return obj;
}

VecX lasso_code(const VecX& signal, const MatX& dictionary, double lambda) {
  if (!signal.allFinite() || !dictionary.allFinite() || !std::isfinite(lambda) || lambda < 0.0)
    throw std::invalid_argument("lasso_code: non-finite input");
  if (dictionary.rows() != signal.size())
    throw std::invalid_argument("lasso_code: dimension mismatch");
  MatX gram = dictionary.transpose() * dictionary;
  VecX dtv = dictionary.transpose() * signal;
  VecX code = VecX::Zero(dictionary.cols());
  lasso_cd(dtv, gram, lambda, code);
  return code;
}

void lasso_code_all(const MatX& signals, const MatX& dictionary, double lambda,
                    MatX& codes, int threads) {
  Eigen::Index n = signals.cols();
  if (codes.rows() != dictionary.cols() || codes.cols() != n)
    throw std::invalid_argument("lasso_code_all: codes shape mismatch");
  MatX gram = dictionary.transpose() * dictionary;
  MatX dtv = dictionary.transpose() * signals;
  MatX old_codes = codes;
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t j) {
    VecX code = old_codes.col(static_cast<Eigen::Index>(j));
    lasso_cd(dtv.col(static_cast<Eigen::Index>(j)), gram, lambda, code);
    codes.col(static_cast<Eigen::Index>(j)) = code;
  });
  // a warm-started solve never legitimately worsens a column; guard against
  // floating-point edge cases so the outer objective stays non-increasing
  VecX new_obj = (signals - dictionary * codes).colwise().squaredNorm().transpose();
  new_obj += lambda * codes.cwiseAbs().colwise().sum().transpose();
  VecX old_obj = (signals - dictionary * old_codes).colwise().squaredNorm().transpose();
  old_obj += lambda * old_codes.cwiseAbs().colwise().sum().transpose();
  for (Eigen::Index j = 0; j < n; ++j)
    if (new_obj[j] > old_obj[j]) codes.col(j) = old_codes.col(j);
}

double lasso_certificate_violation(const VecX& signal, const MatX& dictionary,
                                   const VecX& code, double lambda) {
  VecX corr = 2.0 * dictionary.transpose() * (signal - dictionary * code);
  double viol = 0.0;
  for (Eigen::Index k = 0; k < code.size(); ++k) {
    if (code[k] != 0.0) {
      viol = std::max(viol, std::abs(corr[k] - lambda * (code[k] > 0.0 ? 1.0 : -1.0)));
    } else {
      viol = std::max(viol, std::max(0.0, std::abs(corr[k]) - lambda));
    }
  }
  return viol;
}

void dictionary_update(const MatX& signals, MatX& codes, MatX& dictionary,
                       double lambda) {
  Eigen::Index n = signals.cols();
  Eigen::Index d = dictionary.cols();
  if (n == 0) throw std::invalid_argument("dictionary_update: no signals");

  MatX residual = signals - dictionary * codes;
  for (Eigen::Index k = 0; k < d; ++k) {
    VecX alpha = codes.row(k).transpose();
    double akk = alpha.squaredNorm();
    if (akk <= 0.0) {
      // dead atom: re-seed from the worst-represented signal
      Eigen::Index worst = 0;
      double worst_norm = -1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        double rn = residual.col(j).squaredNorm();
        if (rn > worst_norm) {
          worst_norm = rn;
          worst = j;
        }
      }
      double sn = signals.col(worst).norm();
      if (sn > 0.0) dictionary.col(k) = signals.col(worst) / sn;
      continue; // coefficients are all zero, objective unchanged
    }

    // least squares atom given fixed codes: b / akk, with w = residual * alpha
    VecX w = residual * alpha;
    VecX b = w + dictionary.col(k) * akk;
    double bn = b.norm();
    if (bn <= 0.0) continue;
    VecX direction = b / bn;
    VecX da = dictionary.col(k);
    double alpha_l1 = alpha.cwiseAbs().sum();

    // objective delta for replacing (d_k, alpha) by (atom, scale * alpha),
    // in closed form: residual changes by (da - scale * atom) alpha^T
    auto delta_for = [&](const VecX& atom, double scale) {
      double cross = 2.0 * (w.dot(da) - scale * w.dot(atom));
      double add = akk * (da - scale * atom).squaredNorm();
      return cross + add + lambda * (scale - 1.0) * alpha_l1;
    };

    // candidate 1: exact LS atom folded into unit norm + rescaled codes
    double scale = bn / akk; // norm of the unnormalized LS atom
    if (delta_for(direction, scale) <= 0.0) {
      residual += (da - direction * scale) * alpha.transpose();
      dictionary.col(k) = direction;
      codes.row(k) = (alpha * scale).transpose();
    } else if (delta_for(direction, 1.0) <= 0.0) {
      // fall back to the best unit-norm atom with codes untouched; this is
      // the sphere-constrained optimum, so the l2 term cannot increase
      residual += (da - direction) * alpha.transpose();
      dictionary.col(k) = direction;
    }
  }
}

DictionaryLearning learn_dictionary(const MatX& signals, int atom_count,
                                    double lambda, int iterations,
                                    std::uint64_t rng_seed, int threads) {
  Eigen::Index n = signals.cols();
  if (atom_count < 1) throw std::invalid_argument("learn_dictionary: need at least 1 atom");
  if (static_cast<Eigen::Index>(atom_count) > n)
    throw std::invalid_argument("learn_dictionary: more atoms than signals");

  DictionaryLearning result;
  result.dictionary.resize(signals.rows(), atom_count);
  auto rng = make_rng(rng_seed, RngStream::kDictionaryInit);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 0);
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int k = 0; k < atom_count; ++k) {
    VecX s = signals.col(pool[static_cast<std::size_t>(k)]);
    double sn = s.norm();
    if (sn > 0.0) {
      result.dictionary.col(k) = s / sn;
    } else {
      VecX e = VecX::Zero(signals.rows());
      e[k % signals.rows()] = 1.0;
      result.dictionary.col(k) = e;
    }
  }
  result.codes = MatX::Zero(atom_count, n);
  for (int it = 0; it < iterations; ++it) {
    lasso_code_all(signals, result.dictionary, lambda, result.codes, threads);
    dictionary_update(signals, result.codes, result.dictionary, lambda);
    result.objective.push_back(
        sparse_objective(signals, result.dictionary, result.codes, lambda).total());
  }
  return result;
}

} // namespace lpf
