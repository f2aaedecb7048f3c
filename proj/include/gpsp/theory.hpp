#pragma once

#include "gpsp/block_linalg.hpp"
#include "gpsp/pursuit.hpp"
#include "gpsp/rng.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gpsp::theory {

namespace detail {

using gpsp::detail::require;

/// C(n, k) capped at `limit`; throws capacity_error beyond it.
inline std::uint64_t guarded_binomial(int n, int k, std::uint64_t limit, const char* who) {
  require(k >= 0 && k <= n, "guarded_binomial: k out of range");
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    if (c > limit) throw capacity_error(std::string(who) + ": enumeration guard exceeded");
  }
  return c;
}

/// Calls visit(subset) for every k-subset of {0, ..., n-1} in lexicographic
/// order.
inline void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> subset(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
  while (true) {
    visit(subset);
    int i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
}

inline int numeric_rank(const Matrix& m) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  return static_cast<int>(qr.rank());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Brute-force isometry constants and uniqueness checks.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kSubsetGuard = 1000000;

/// Exact block restricted isometry constant of order k: the maximum over all
/// k-block submatrices A_T of max(sigma_max(A_T)^2 - 1, 1 - sigma_min(A_T)^2).
/// Values above 1 are reported as-is; the matrix then fails the isometry
/// property at that order.
inline double bric_bruteforce(const BlockMatrix& a, int k) {
  detail::require(k >= 1 && k <= a.n_blocks(), "bric_bruteforce: k out of range");
  detail::guarded_binomial(a.n_blocks(), k, kSubsetGuard, "bric_bruteforce");
  double delta = 0.0;
  detail::for_each_subset(a.n_blocks(), k, [&](const std::vector<int>& subset) {
    const Matrix sub = block_submatrix(a, BlockSupport(subset));
    const auto [smin, smax] = extreme_singular_values(sub);
    delta = std::max({delta, smax * smax - 1.0, 1.0 - smin * smin});
  });
  return delta;
}

/// Brute-forced constants delta_{M,k} for a set of orders.
struct BricReport {
  int block_size = 0;
  std::map<int, double> delta_by_k;
  bool exhaustive = false;

  bool has(int k) const { return delta_by_k.count(k) != 0; }
  double at(int k) const {
    auto it = delta_by_k.find(k);
    gpsp::detail::require(it != delta_by_k.end(), "BricReport: missing order");
    return it->second;
  }
};

inline BricReport bric_report(const BlockMatrix& a, const std::vector<int>& orders) {
  BricReport r;
  r.block_size = a.block_size();
  for (int k : orders)
    if (!r.has(k)) r.delta_by_k[k] = bric_bruteforce(a, k);
  r.exhaustive = true;
  return r;
}

/// Smallest number of linearly dependent columns; full-column-rank matrices
/// get rank + 1 by convention.
inline int spark_bruteforce(const Matrix& a) {
  const int n = static_cast<int>(a.cols());
  if (n > 20) throw capacity_error("spark_bruteforce: more than 20 columns");
  for (int m = 1; m <= n; ++m) {
    bool dependent = false;
    detail::for_each_subset(n, m, [&](const std::vector<int>& subset) {
      if (dependent) return;
      Matrix sub(a.rows(), m);
      for (int i = 0; i < m; ++i) sub.col(i) = a.col(subset[static_cast<std::size_t>(i)]);
      if (detail::numeric_rank(sub) < m) dependent = true;
    });
    if (dependent) return m;
  }
  return detail::numeric_rank(a) + 1;
}

/// True iff no nonzero block 2k-sparse vector lies in ker(A): every
/// submatrix with min(2k, G) blocks has full column rank.
inline bool block_uniqueness(const BlockMatrix& a, int k) {
  detail::require(k >= 1 && k <= a.n_blocks(), "block_uniqueness: k out of range");
  const int m = std::min(2 * k, a.n_blocks());
  detail::guarded_binomial(a.n_blocks(), m, kSubsetGuard, "block_uniqueness");
  bool unique = true;
  detail::for_each_subset(a.n_blocks(), m, [&](const std::vector<int>& subset) {
    if (!unique) return;
    const Matrix sub = block_submatrix(a, BlockSupport(subset));
    if (detail::numeric_rank(sub) < sub.cols()) unique = false;
  });
  return unique;
}

/// Per-block within-block sparsity bound (spark(A) - 1) / (2G) guaranteeing
/// unique block-sparse solutions.
inline double spark_uniqueness_bound(const Matrix& a, int n_blocks) {
  detail::require(n_blocks >= 1, "spark_uniqueness_bound: invalid block count");
  return static_cast<double>(spark_bruteforce(a) - 1) / (2.0 * n_blocks);
}

// ---------------------------------------------------------------------------
// Closed-form convergence constants. All take the single isometry constant
// delta = delta_{M,2k} in (0, 1); the classical symbols are noted inline.
// ---------------------------------------------------------------------------

namespace detail {
inline void require_open_unit(double delta, const char* who) {
  require(delta > 0.0 && delta < 1.0, who);
}
}  // namespace detail

/// C: exact-recovery sufficient bound. GPSP recovers exactly when C < 1.
inline double exact_recovery_bound(double delta) {
  detail::require_open_unit(delta, "exact_recovery_bound: delta outside (0,1)");
  const double num = delta * (1.0 + delta) * (3.0 - delta) *
                     (-delta * delta + 2.0 * delta + 1.0);
  return num / std::pow(1.0 - delta, 6);
}

/// G: scaling factor bounding recovery distortion by the perturbation norm.
inline double distortion_factor(double delta) {
  detail::require_open_unit(delta, "distortion_factor: delta outside (0,1)");
  return (1.0 + 2.0 * delta) / (delta * (1.0 - delta));
}

/// D: contraction of the missed-coefficient mass under noise.
inline double noisy_miss_decay(double delta) {
  detail::require_open_unit(delta, "noisy_miss_decay: delta outside (0,1)");
  return 6.0 * std::sqrt(2.0) * delta * delta * (1.0 + delta) * (2.0 - delta) /
         std::pow(1.0 - delta, 5);
}

/// E: gain applied to the perturbation norm in the per-iteration miss bound.
inline double noisy_noise_gain(double delta) {
  detail::require_open_unit(delta, "noisy_noise_gain: delta outside (0,1)");
  return (12.0 * delta * std::pow(1.0 + delta, 2) +
          (2.0 - delta) * std::pow(1.0 - delta, 3)) /
         std::pow(1.0 - delta, 5);
}

/// F: when F < 1 the residual strictly shrinks whenever the perturbation is
/// small relative to the still-missing signal mass.
inline double noisy_residual_bound(double delta) {
  detail::require_open_unit(delta, "noisy_residual_bound: delta outside (0,1)");
  const double d = noisy_miss_decay(delta);
  const double e = noisy_noise_gain(delta);
  return delta / (1.0 - delta) +
         (std::sqrt(1.0 + delta) * d + delta * (std::sqrt(1.0 + delta) * e + 2.0)) /
             std::sqrt(1.0 - delta);
}

/// Per-iteration constants evaluated with the three distinct isometry orders
/// delta_1 <= delta_k <= delta_2k. Classical symbols in comments.
struct ConvergenceConstants {
  double expansion_decay = 0.0;     // beta: miss after expansion vs before
  double shrink_growth = 0.0;       // mu: miss after shrink vs after expansion
  double residual_decay = 0.0;      // rho = mu * beta * sqrt(1-delta_k^2) / (1-delta_k-delta_2k)
  double exact_bound = 0.0;         // C at delta_2k
  double distortion = 0.0;          // G at delta_2k (infinite at delta_2k = 0)
  double miss_decay_noisy = 0.0;    // D at delta_2k
  double noise_gain = 0.0;          // E at delta_2k
  double residual_bound_noisy = 0.0;  // F at delta_2k
  double expand_miss_coeff = 0.0;   // a: noisy expansion, miss term
  double expand_noise_coeff = 0.0;  // b: noisy expansion, noise term
  double shrink_miss_coeff = 0.0;   // c: noisy shrink, miss term
  double shrink_noise_coeff = 0.0;  // d: noisy shrink, noise term
};

inline ConvergenceConstants convergence_constants(double delta_1, double delta_k,
                                                  double delta_2k) {
  detail::require(delta_1 >= 0.0 && delta_1 <= delta_k && delta_k <= delta_2k &&
                      delta_2k < 1.0,
                  "convergence_constants: need 0 <= delta_1 <= delta_k <= delta_2k < 1");
  detail::require(1.0 - delta_k - delta_2k > 0.0,
                  "convergence_constants: residual-decay denominator nonpositive");

  const double ratio1 = (1.0 + delta_1) / (1.0 - delta_1);

  ConvergenceConstants c;
  c.expansion_decay = delta_2k * (1.0 - delta_k + delta_2k) /
                      std::pow(1.0 - delta_k, 2) * (std::sqrt(2.0 * ratio1) + 1.0);
  c.shrink_growth = 1.0 + std::sqrt(2.0) * delta_2k / (1.0 - delta_2k) *
                              (1.0 + std::sqrt(ratio1));
  c.residual_decay = c.shrink_growth * c.expansion_decay *
                     std::sqrt(1.0 - delta_k * delta_k) /
                     (1.0 - delta_k - delta_2k);

  if (delta_2k > 0.0) {
    c.exact_bound = exact_recovery_bound(delta_2k);
    c.distortion = distortion_factor(delta_2k);
    c.miss_decay_noisy = noisy_miss_decay(delta_2k);
    c.noise_gain = noisy_noise_gain(delta_2k);
    c.residual_bound_noisy = noisy_residual_bound(delta_2k);
  } else {
    c.distortion = std::numeric_limits<double>::infinity();
    c.noise_gain = 2.0;  // limit of E as delta -> 0
    c.residual_bound_noisy = 0.0;
  }

  c.expand_miss_coeff = delta_2k *
                        (std::sqrt(2.0 / (1.0 - delta_1)) + 1.0 / std::sqrt(1.0 + delta_1)) *
                        ((1.0 - delta_k + delta_2k) / (1.0 - delta_k)) *
                        (std::sqrt(1.0 + delta_1) / (1.0 - delta_k));
  c.expand_noise_coeff = 2.0 * std::sqrt((1.0 + delta_k) / (1.0 - delta_1)) *
                         std::sqrt(1.0 + delta_1) / (1.0 - delta_k);
  c.shrink_miss_coeff = (1.0 + std::sqrt(ratio1)) * std::sqrt(2.0) * delta_2k /
                        (1.0 - delta_2k);
  c.shrink_noise_coeff = (1.0 + std::sqrt(ratio1)) / std::sqrt(1.0 - delta_2k);
  return c;
}

/// Root of f(x) = 1 on [lo, hi] by bisection; f must be monotone with
/// f(lo) < 1 < f(hi).
inline double bisect_threshold(const std::function<double(double)>& f, double lo,
                               double hi, double tol) {
  detail::require(lo < hi && tol > 0.0, "bisect_threshold: bad bracket");
  detail::require(f(lo) < 1.0 && f(hi) > 1.0, "bisect_threshold: bracket does not straddle 1");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Per-iteration inequality verification on instrumented runs.
// ---------------------------------------------------------------------------

struct InequalityCheck {
  int iteration = 0;
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct VerificationReport {
  bool hypothesis_met = false;  // all isometry constants < 1 and denominators positive
  double delta_1 = 0.0, delta_k = 0.0, delta_2k = 0.0;
  ConvergenceConstants constants;
  std::vector<InequalityCheck> checks;
  bool exact_recovery = false;

  bool all_hold() const {
    for (const auto& c : checks)
      if (!c.holds) return false;
    return true;
  }
};

/// Evaluates both sides of the per-iteration convergence inequalities on a
/// recorded run of the projected subspace pursuit against y = A c* (+ e).
/// Noiseless runs check the expansion / shrink / residual-decay bounds; noisy
/// runs (noise_norm > 0) check the perturbed counterparts, including the
/// strict residual decrease whenever the perturbation is small enough for the
/// clause to apply. Inequalities carry a 1e-9 absolute slack for
/// floating-point error in the singular values.
inline VerificationReport verify_gpsp_theorems(const BlockMatrix& a,
                                               const BlockSignal& c_star,
                                               const PursuitResult& run,
                                               const BricReport& bric,
                                               double noise_norm = 0.0) {
  const int k = run.trace.sparsity;
  detail::require(k >= 1, "verify_gpsp_theorems: trace has no sparsity");
  detail::require(bric.exhaustive, "verify_gpsp_theorems: report not exhaustive");
  detail::require(bric.has(1) && bric.has(k) && bric.has(2 * k),
                  "verify_gpsp_theorems: missing isometry orders 1, k, 2k");

  constexpr double kSlack = 1e-9;

  VerificationReport rep;
  rep.delta_1 = bric.at(1);
  rep.delta_k = bric.at(k);
  rep.delta_2k = bric.at(2 * k);
  rep.exact_recovery = run.outcome.support == c_star.block_support();

  rep.hypothesis_met = rep.delta_2k < 1.0 && (1.0 - rep.delta_k - rep.delta_2k) > 0.0;
  if (!rep.hypothesis_met) return rep;

  rep.constants = convergence_constants(rep.delta_1, rep.delta_k, rep.delta_2k);
  const ConvergenceConstants& c = rep.constants;
  const BlockSupport t_star = c_star.block_support();

  auto push = [&](int iter, const char* name, double lhs, double rhs, bool strict = false) {
    InequalityCheck chk;
    chk.iteration = iter;
    chk.name = name;
    chk.lhs = lhs;
    chk.rhs = rhs;
    chk.holds = strict ? lhs < rhs : lhs <= rhs + kSlack;
    rep.checks.push_back(std::move(chk));
  };

  double prev_residual = run.trace.initial_residual_norm;
  for (std::size_t i = 0; i < run.trace.iterations.size(); ++i) {
    const PursuitIteration& it = run.trace.iterations[i];
    const int l = static_cast<int>(i) + 1;
    const double miss_before = c_star.norm_on(support_difference(t_star, it.support_before));
    const double miss_expanded = c_star.norm_on(support_difference(t_star, it.expanded_support));
    const double miss_after = c_star.norm_on(support_difference(t_star, it.support_after));

    if (noise_norm == 0.0) {
      push(l, "expansion", miss_expanded, c.expansion_decay * miss_before);
      push(l, "shrink", miss_after, c.shrink_growth * miss_expanded);
      push(l, "residual_decay", it.residual_norm, c.residual_decay * prev_residual);
    } else {
      push(l, "expansion_noisy", miss_expanded,
           c.expand_miss_coeff * miss_before + c.expand_noise_coeff * noise_norm);
      push(l, "shrink_noisy", miss_after,
           c.shrink_miss_coeff * miss_expanded + c.shrink_noise_coeff * noise_norm);
      push(l, "iteration_miss_noisy", miss_after,
           c.miss_decay_noisy * miss_before + c.noise_gain * noise_norm);
      if (c.residual_bound_noisy < 1.0 && noise_norm <= rep.delta_2k * miss_before)
        push(l, "residual_strict_decrease", it.residual_norm, prev_residual,
             /*strict=*/true);
    }
    prev_residual = it.residual_norm;
  }

  if (noise_norm > 0.0) {
    // Final reconstruction distortion bound.
    const double miss_final =
        c_star.norm_on(support_difference(t_star, run.outcome.support));
    const double lhs = (c_star.coeffs() - run.outcome.coefficients.coeffs()).norm();
    const double rhs = (1.0 + rep.delta_2k - rep.delta_k) / (1.0 - rep.delta_k) * miss_final +
                       noise_norm / std::sqrt(1.0 - rep.delta_k);
    push(0, "reconstruction_bound", lhs, rhs);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Certified instance construction.
// ---------------------------------------------------------------------------

/// A = Q + eps * R with Q orthonormal columns (needs rows >= G*M) and R
/// standard Gaussian; eps is tuned by bisection until the brute-forced
/// constant of the requested order lands in [delta_lo, delta_hi].
inline BlockMatrix make_near_isometry(int rows, int n_blocks, int block_size,
                                      int bric_order, double delta_lo, double delta_hi,
                                      std::uint64_t seed) {
  detail::require(rows >= n_blocks * block_size,
                  "make_near_isometry: rows must be >= G*M for orthonormal base");
  detail::require(0.0 < delta_lo && delta_lo < delta_hi && delta_hi < 1.0,
                  "make_near_isometry: bad target interval");
  StreamRng rng(seed, 0, 0x6e6561726973ULL);
  const Eigen::Index n = rows, m = static_cast<Eigen::Index>(n_blocks) * block_size;
  Matrix raw(n, m), noise(n, m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) raw(i, j) = rng.normal();
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < n; ++i) noise(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(raw);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, m);

  auto delta_at = [&](double eps) {
    return bric_bruteforce(BlockMatrix(q + eps * noise, n_blocks, block_size), bric_order);
  };

  double lo = 0.0, hi = 0.02;
  double d_hi = delta_at(hi);
  int grow = 0;
  while (d_hi < delta_lo) {
    lo = hi;
    hi *= 2.0;
    d_hi = delta_at(hi);
    detail::require(++grow < 60, "make_near_isometry: failed to bracket target");
  }
  if (d_hi <= delta_hi) return BlockMatrix(q + hi * noise, n_blocks, block_size);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double d = delta_at(mid);
    if (d < delta_lo) {
      lo = mid;
    } else if (d > delta_hi) {
      hi = mid;
    } else {
      return BlockMatrix(q + mid * noise, n_blocks, block_size);
    }
  }
  throw std::runtime_error("make_near_isometry: bisection failed to land in interval");
}

}  // namespace gpsp::theory
