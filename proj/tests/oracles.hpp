#pragma once

// Test-only reference computations. These deliberately take different
// numerical routes than the library (normal equations instead of SVD, Gram
// eigenvalues instead of singular values, exhaustive search instead of
// greedy selection) so they can serve as independent oracles.

#include "gpsp/block_linalg.hpp"
#include "gpsp/rng.hpp"
#include "gpsp/theory.hpp"

#include <Eigen/Dense>

#include <limits>
#include <vector>

namespace oracles {

using gpsp::BlockMatrix;
using gpsp::BlockSupport;
using gpsp::Matrix;
using gpsp::Vector;

/// Full-column-rank least squares via the normal equations (Cholesky).
inline Vector normal_equation_solve(const Matrix& b, const Vector& y) {
  return (b.transpose() * b).llt().solve(b.transpose() * y);
}

/// Square-system solve by LU, for hand-sized exact systems.
inline Vector direct_solve(const Matrix& b, const Vector& y) {
  return b.partialPivLu().solve(y);
}

/// Singular values from the eigenvalues of B^T B.
inline std::pair<double, double> gram_singular_values(const Matrix& b) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(b.transpose() * b);
  const auto& ev = es.eigenvalues();
  const double lo = std::max(ev(0), 0.0);
  const double hi = std::max(ev(ev.size() - 1), 0.0);
  return {std::sqrt(lo), std::sqrt(hi)};
}

/// Isometry constant of one block subset via Gram eigenvalues.
inline double subset_gram_delta(const BlockMatrix& a, const std::vector<int>& subset) {
  const Matrix sub = gpsp::block_submatrix(a, BlockSupport(subset));
  Eigen::SelfAdjointEigenSolver<Matrix> es(sub.transpose() * sub);
  const auto& ev = es.eigenvalues();
  return std::max(ev(ev.size() - 1) - 1.0, 1.0 - ev(0));
}

/// Best k-block support by exhaustive search: the subset minimizing the
/// least-squares residual.
inline BlockSupport exhaustive_best_support(const BlockMatrix& a, const Vector& y, int k) {
  BlockSupport best;
  double best_norm = std::numeric_limits<double>::infinity();
  gpsp::theory::detail::for_each_subset(a.n_blocks(), k, [&](const std::vector<int>& subset) {
    const BlockSupport t(subset);
    const Matrix sub = gpsp::block_submatrix(a, t);
    const double r = gpsp::residual(y, sub).norm();
    if (r < best_norm) {
      best_norm = r;
      best = t;
    }
  });
  return best;
}

/// Random dense matrix with standard normal entries.
inline Matrix random_matrix(int rows, int cols, std::uint64_t seed) {
  gpsp::StreamRng rng(seed, 0, 7);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Vector random_vector(int n, std::uint64_t seed) {
  gpsp::StreamRng rng(seed, 1, 7);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.normal();
  return v;
}

}  // namespace oracles
