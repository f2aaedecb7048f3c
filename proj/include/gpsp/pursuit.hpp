#pragma once

#include "gpsp/block_linalg.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace gpsp {

// ---------------------------------------------------------------------------
// Block scoring criteria.
//
// Inclusion (expansion stage), measuring correlation between a residual d and
// one block F_g:
//   IPC  ||F_g^T d||_2          accumulated inner products
//   SPC  ||proj(d, F_g)||_2     norm of the projection onto col(F_g)
// Exclusion (shrinking stage), ranking blocks of a joint fit x_p:
//   RCC  ||x_p[g]||_2           regression coefficient magnitude
//   RMC  ||F_g x_p[g]||_2       reconstructed response magnitude
// ---------------------------------------------------------------------------

inline double score_ipc(const Eigen::Ref<const Matrix>& block, const Vector& d) {
  detail::require(block.rows() == d.size(), "score_ipc: dimension mismatch");
  return (block.transpose() * d).norm();
}

inline double score_spc(const Eigen::Ref<const Matrix>& block, const Vector& d) {
  detail::require(block.rows() == d.size(), "score_spc: dimension mismatch");
  return project(d, block).norm();
}

inline double score_rcc(const BlockSignal& x, int g) {
  detail::require(g >= 0 && g < x.n_blocks(), "score_rcc: invalid block index");
  return x.block(g).norm();
}

inline double score_rmc(const Eigen::Ref<const Matrix>& block,
                        const Eigen::Ref<const Vector>& x_g) {
  detail::require(block.cols() == x_g.size(), "score_rmc: dimension mismatch");
  return (block * x_g).norm();
}

/// Indices of the k largest scores, ties broken by smallest index, returned
/// in increasing order.
inline std::vector<int> top_k(const Vector& scores, int k) {
  detail::require(k >= 0 && k <= scores.size(), "top_k: k out of range");
  std::vector<int> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores(a) > scores(b); });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

// ---------------------------------------------------------------------------
// Criteria framework. Every algorithm in the family is a choice of inclusion
// criterion, exclusion criterion, expansion width, and initialization:
//
//   BOMP     IPC  -    one per iteration   empty init
//   BOMPR    SPC  -    one per iteration   empty init
//   BCoSaMP  IPC  RCC  2k per iteration    empty init
//   BSP      IPC  RCC  k per iteration     top-k by IPC
//   GPSP     SPC  RMC  k per iteration     top-k by SPC
// ---------------------------------------------------------------------------

enum class InclusionCriterion { kIpc, kSpc };
enum class ExclusionCriterion { kRcc, kRmc, kNone };
enum class ExpansionWidth { kK, kTwoK, kOne };
enum class InitRule { kEmpty, kTopKByInclusion };

struct CriteriaSpec {
  InclusionCriterion inclusion = InclusionCriterion::kSpc;
  ExclusionCriterion exclusion = ExclusionCriterion::kRmc;
  ExpansionWidth expansion = ExpansionWidth::kK;
  InitRule init = InitRule::kTopKByInclusion;

  void validate() const {
    const bool greedy = expansion == ExpansionWidth::kOne;
    if (greedy) {
      detail::require(exclusion == ExclusionCriterion::kNone,
                      "CriteriaSpec: single-candidate expansion never shrinks");
      detail::require(init == InitRule::kEmpty,
                      "CriteriaSpec: single-candidate algorithms start empty");
    } else {
      detail::require(exclusion != ExclusionCriterion::kNone,
                      "CriteriaSpec: multi-candidate expansion requires a shrink criterion");
    }
  }

  static CriteriaSpec bomp() {
    return {InclusionCriterion::kIpc, ExclusionCriterion::kNone, ExpansionWidth::kOne,
            InitRule::kEmpty};
  }
  static CriteriaSpec bompr() {
    return {InclusionCriterion::kSpc, ExclusionCriterion::kNone, ExpansionWidth::kOne,
            InitRule::kEmpty};
  }
  static CriteriaSpec bcosamp() {
    return {InclusionCriterion::kIpc, ExclusionCriterion::kRcc, ExpansionWidth::kTwoK,
            InitRule::kEmpty};
  }
  static CriteriaSpec bsp() {
    return {InclusionCriterion::kIpc, ExclusionCriterion::kRcc, ExpansionWidth::kK,
            InitRule::kTopKByInclusion};
  }
  static CriteriaSpec gpsp() {
    return {InclusionCriterion::kSpc, ExclusionCriterion::kRmc, ExpansionWidth::kK,
            InitRule::kTopKByInclusion};
  }

  bool operator==(const CriteriaSpec&) const = default;
};

enum class Termination { kResidualStalled, kMaxIter, kExactFit };

struct PursuitIteration {
  BlockSupport support_before;    // T^{l-1}
  BlockSupport expanded_support;  // T-tilde^l
  BlockSignal intermediate;       // x_p^l scattered to full length
  BlockSupport support_after;     // T^l before any stall revert
  double residual_norm = 0.0;     // ||y_r^l||
};

struct PursuitTrace {
  int sparsity = 0;
  BlockSupport initial_support;
  double initial_residual_norm = 0.0;
  std::vector<PursuitIteration> iterations;
};

struct PursuitOutcome {
  BlockSupport support;
  BlockSignal coefficients;  // zeros outside support, A_T^+ y on it
  double final_residual_norm = 0.0;
  int iterations = 0;
  Termination termination = Termination::kMaxIter;
};

struct PursuitResult {
  PursuitOutcome outcome;
  PursuitTrace trace;
};

namespace detail {

inline Vector inclusion_scores(const BlockMatrix& a, const Vector& d,
                               InclusionCriterion crit) {
  Vector s(a.n_blocks());
  for (int g = 0; g < a.n_blocks(); ++g)
    s(g) = crit == InclusionCriterion::kIpc ? score_ipc(a.block(g), d)
                                            : score_spc(a.block(g), d);
  return s;
}

/// Least squares restricted to support, scattered back to full length.
inline BlockSignal fit_on_support(const BlockMatrix& a, const Vector& y,
                                  const BlockSupport& t) {
  BlockSignal x = BlockSignal::zero(a.n_blocks(), a.block_size());
  if (t.empty()) return x;
  const Vector coef = least_squares(block_submatrix(a, t), y);
  for (int i = 0; i < t.size(); ++i)
    x.block(t[i]) = coef.segment(static_cast<Eigen::Index>(i) * a.block_size(),
                                 a.block_size());
  return x;
}

inline Vector residual_on_support(const BlockMatrix& a, const Vector& y,
                                  const BlockSupport& t) {
  if (t.empty()) return y;
  return residual(y, block_submatrix(a, t));
}

/// Top-k of the expanded support under the exclusion criterion; candidate
/// list is ascending, so stable ordering keeps the lowest-index tie rule.
inline BlockSupport shrink_support(const BlockMatrix& a, const BlockSignal& x_p,
                                   const BlockSupport& expanded, int k,
                                   ExclusionCriterion crit) {
  Vector s(expanded.size());
  for (int i = 0; i < expanded.size(); ++i) {
    const int g = expanded[i];
    s(i) = crit == ExclusionCriterion::kRcc ? score_rcc(x_p, g)
                                            : score_rmc(a.block(g), x_p.block(g));
  }
  const std::vector<int> keep = top_k(s, std::min(k, expanded.size()));
  std::vector<int> blocks;
  blocks.reserve(keep.size());
  for (int i : keep) blocks.push_back(expanded[i]);
  return BlockSupport(std::move(blocks));
}

inline PursuitOutcome finish(const BlockMatrix& a, const Vector& y, BlockSupport t,
                             int iterations, Termination why) {
  PursuitOutcome out;
  out.coefficients = fit_on_support(a, y, t);
  out.final_residual_norm = (y - a.entries() * out.coefficients.coeffs()).norm();
  out.support = std::move(t);
  out.iterations = iterations;
  out.termination = why;
  return out;
}

/// Greedy matching-pursuit loop: exactly k iterations, one block added per
/// iteration, no shrink stage.
inline PursuitResult greedy_pursuit(const BlockMatrix& a, const Vector& y, int k,
                                    InclusionCriterion crit) {
  PursuitResult result;
  result.trace.sparsity = k;
  result.trace.initial_support = BlockSupport();
  result.trace.initial_residual_norm = y.norm();

  BlockSupport t;
  Vector y_r = y;
  for (int l = 1; l <= k; ++l) {
    Vector scores = inclusion_scores(a, y_r, crit);
    for (int g : t) scores(g) = -1.0;  // exclude already-selected blocks
    int best = 0;
    for (int g = 1; g < a.n_blocks(); ++g)
      if (scores(g) > scores(best)) best = g;

    PursuitIteration it;
    it.support_before = t;
    t = support_union(t, BlockSupport({best}));
    it.expanded_support = t;
    it.intermediate = fit_on_support(a, y, t);
    it.support_after = t;
    y_r = y - a.entries() * it.intermediate.coeffs();
    it.residual_norm = y_r.norm();
    result.trace.iterations.push_back(std::move(it));
  }

  const double fit_tol = 1e-12 * y.norm();
  const Termination why =
      y_r.norm() <= fit_tol ? Termination::kExactFit : Termination::kMaxIter;
  result.outcome = finish(a, y, t, k, why);
  return result;
}

}  // namespace detail

/// Shared loop skeleton behind GPSP, BSP, and BCoSaMP, parameterized by the
/// criteria choice. Expansion unions the current support with the top-scoring
/// blocks against the running residual, a joint least-squares fit is pruned
/// back to k blocks by the exclusion criterion, and the loop stops at the
/// first residual non-decrease (reverting to the previous support), on an
/// exact fit, or at max_iter.
inline PursuitResult generic_pursuit(const BlockMatrix& a, const Vector& y, int k,
                                     const CriteriaSpec& spec, int max_iter = 50) {
  spec.validate();
  detail::require(y.size() == a.rows(), "generic_pursuit: dimension mismatch");
  detail::require(y.size() > 0, "generic_pursuit: empty observation");
  detail::require(k >= 1 && k <= a.n_blocks(), "generic_pursuit: k out of range");
  detail::require(max_iter >= 1, "generic_pursuit: max_iter must be >= 1");

  if (spec.expansion == ExpansionWidth::kOne)
    return detail::greedy_pursuit(a, y, k, spec.inclusion);

  const int width = spec.expansion == ExpansionWidth::kTwoK ? 2 * k : k;
  detail::require(width <= a.n_blocks(), "generic_pursuit: expansion width exceeds G");

  const double fit_tol = 1e-12 * y.norm();

  PursuitResult result;
  result.trace.sparsity = k;

  BlockSupport t;
  if (spec.init == InitRule::kTopKByInclusion)
    t = BlockSupport(top_k(detail::inclusion_scores(a, y, spec.inclusion), k));
  Vector y_r = detail::residual_on_support(a, y, t);
  double prev_norm = y_r.norm();
  result.trace.initial_support = t;
  result.trace.initial_residual_norm = prev_norm;

  if (prev_norm <= fit_tol) {
    result.outcome = detail::finish(a, y, t, 0, Termination::kExactFit);
    return result;
  }

  for (int l = 1; l <= max_iter; ++l) {
    PursuitIteration it;
    it.support_before = t;

    const std::vector<int> cand = top_k(detail::inclusion_scores(a, y_r, spec.inclusion), width);
    it.expanded_support = support_union(t, BlockSupport(cand));
    it.intermediate = detail::fit_on_support(a, y, it.expanded_support);
    it.support_after = detail::shrink_support(a, it.intermediate, it.expanded_support,
                                              k, spec.exclusion);
    y_r = detail::residual_on_support(a, y, it.support_after);
    it.residual_norm = y_r.norm();

    const BlockSupport chosen = it.support_after;
    const double norm_l = it.residual_norm;
    result.trace.iterations.push_back(std::move(it));

    if (norm_l >= prev_norm) {  // stall: revert and stop
      result.outcome = detail::finish(a, y, t, l, Termination::kResidualStalled);
      return result;
    }
    t = chosen;
    prev_norm = norm_l;
    if (norm_l <= fit_tol) {
      result.outcome = detail::finish(a, y, t, l, Termination::kExactFit);
      return result;
    }
  }
  result.outcome = detail::finish(a, y, t, max_iter, Termination::kMaxIter);
  return result;
}

inline PursuitResult run_gpsp(const BlockMatrix& a, const Vector& y, int k, int max_iter = 50) {
  return generic_pursuit(a, y, k, CriteriaSpec::gpsp(), max_iter);
}

inline PursuitResult run_bsp(const BlockMatrix& a, const Vector& y, int k, int max_iter = 50) {
  return generic_pursuit(a, y, k, CriteriaSpec::bsp(), max_iter);
}

inline PursuitResult run_bcosamp(const BlockMatrix& a, const Vector& y, int k, int max_iter = 50) {
  detail::require(2 * k <= a.n_blocks(), "bcosamp: 2k exceeds number of blocks");
  return generic_pursuit(a, y, k, CriteriaSpec::bcosamp(), max_iter);
}

inline PursuitResult run_bomp(const BlockMatrix& a, const Vector& y, int k) {
  return generic_pursuit(a, y, k, CriteriaSpec::bomp(), 1);
}

inline PursuitResult run_bompr(const BlockMatrix& a, const Vector& y, int k) {
  return generic_pursuit(a, y, k, CriteriaSpec::bompr(), 1);
}

}  // namespace gpsp
