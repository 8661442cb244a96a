#pragma once

#include <cstdint>
#include <vector>

#include "lpf/geometry.hpp"

namespace lpf {

/// Objective pieces of sum_j |V_j - D a_j|^2 + lambda * sum_j |a_j|_1.
struct SparseObjective {
  double l2 = 0.0;
  double l1 = 0.0;
  double lambda = 0.0;
  double total() const { return l2 + lambda * l1; }
};

SparseObjective sparse_objective(const MatX& signals, const MatX& dictionary,
                                 const MatX& codes, double lambda);

/// Coordinate-descent LASSO: minimizes |V - D a|^2 + lambda |a|_1.
/// The result satisfies the subgradient certificate
///   |2 d_k^T (V - D a) - lambda sign(a_k)| <= tol   for a_k != 0
///   |2 d_k^T (V - D a)| <= lambda + tol             for a_k == 0
/// with tol = 1e-7. Throws on non-finite input.
VecX lasso_code(const VecX& signal, const MatX& dictionary, double lambda);

/// Batched version with shared Gram matrix and warm starts; codes' columns
/// are updated in place and a column is only replaced when the new code does
/// not worsen that signal's objective. Deterministic for any thread count.
void lasso_code_all(const MatX& signals, const MatX& dictionary, double lambda,
                    MatX& codes, int threads);

/// Max violation of the certificate above (0 when satisfied).
double lasso_certificate_violation(const VecX& signal, const MatX& dictionary,
                                   const VecX& code, double lambda);

/// One block-coordinate pass over the atoms with codes fixed: each atom is
/// re-solved in least squares, renormalized to unit norm with its coefficients
/// rescaled inversely. A candidate that would raise the total objective falls
/// back to the direction-only update (codes untouched), so the objective never
/// increases. Atoms used by no signal are re-seeded from the signal with the
/// largest residual. codes and dictionary are updated in place.
void dictionary_update(const MatX& signals, MatX& codes, MatX& dictionary,
                       double lambda);

struct DictionaryLearning {
  MatX dictionary;               // 3M x d, unit-norm columns
  MatX codes;                    // d x N
  std::vector<double> objective; // after every inner alternation
};

/// Initializes d atoms from distinct random signals and alternates coding and
/// dictionary updates for the given number of rounds. Throws if d exceeds the
/// number of signals.
DictionaryLearning learn_dictionary(const MatX& signals, int atom_count,
                                    double lambda, int iterations,
                                    std::uint64_t rng_seed, int threads = 1);

} // namespace lpf
