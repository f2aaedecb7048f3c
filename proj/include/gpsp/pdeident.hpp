#pragma once

#include "gpsp/bspline.hpp"
#include "gpsp/burgers.hpp"
#include "gpsp/pursuit.hpp"

#include <string>
#include <vector>

namespace gpsp::pde {

/// One dictionary entry: a product of up to three factors, each a spatial
/// derivative of u of order 0..4, stored as a sorted multiset of orders.
/// {0, 1} is u * u_x, {2} is u_xx.
struct FeatureTerm {
  std::vector<int> orders;

  std::string name() const {
    static const char* base[] = {"u", "u_x", "u_xx", "u_xxx", "u_xxxx"};
    std::string out;
    for (std::size_t i = 0; i < orders.size();) {
      std::size_t j = i;
      while (j < orders.size() && orders[j] == orders[i]) ++j;
      if (!out.empty()) out += "*";
      out += base[orders[i]];
      if (j - i > 1) out += "^" + std::to_string(j - i);
      i = j;
    }
    return out;
  }

  bool operator==(const FeatureTerm&) const = default;
};

/// All multisets of size 1..3 over derivative orders 0..4, ordered by size
/// then lexicographically: 5 + 15 + 35 = 55 terms.
inline std::vector<FeatureTerm> enumerate_dictionary() {
  std::vector<FeatureTerm> terms;
  for (int a = 0; a < 5; ++a) terms.push_back({{a}});
  for (int a = 0; a < 5; ++a)
    for (int b = a; b < 5; ++b) terms.push_back({{a, b}});
  for (int a = 0; a < 5; ++a)
    for (int b = a; b < 5; ++b)
      for (int c = b; c < 5; ++c) terms.push_back({{a, b, c}});
  return terms;
}

struct FeatureData {
  std::vector<Matrix> derivative_fine;  // order 0..4, fine space x time
  std::vector<Matrix> derivative;       // order 0..4, downsampled space x time
  Matrix u_t;                           // downsampled space x time
  std::vector<FeatureTerm> terms;
  std::vector<Matrix> values;           // per term, downsampled space x time
};

/// Spatial derivatives are evaluated spectrally on the fine grid and then
/// downsampled; u_t uses centered time differences on the coarse grid with
/// one-sided stencils at the two temporal endpoints; each term's value is the
/// pointwise product of its factors.
inline FeatureData evaluate_features(const PdeGrid& grid) {
  gpsp::detail::require(grid.u_fine_space.size() > 0,
                        "evaluate_features: grid lacks fine spatial data");
  const int n_fine = static_cast<int>(grid.u_fine_space.rows());
  const int n_out = static_cast<int>(grid.u.rows());
  const int n_t = static_cast<int>(grid.u.cols());
  const int sx = n_fine / n_out;
  const SpectralPeriodic spec(n_fine);

  FeatureData f;
  f.derivative_fine.reserve(5);
  f.derivative.reserve(5);
  for (int order = 0; order <= 4; ++order) {
    Matrix fine = spec.deriv(order) * grid.u_fine_space;
    Matrix coarse(n_out, n_t);
    for (int i = 0; i < n_out; ++i) coarse.row(i) = fine.row(i * sx);
    f.derivative_fine.push_back(std::move(fine));
    f.derivative.push_back(std::move(coarse));
  }

  f.u_t.resize(n_out, n_t);
  const double dt = grid.t_step;
  for (int s = 0; s < n_t; ++s) {
    if (s == 0) {
      f.u_t.col(s) = (grid.u.col(1) - grid.u.col(0)) / dt;
    } else if (s == n_t - 1) {
      f.u_t.col(s) = (grid.u.col(s) - grid.u.col(s - 1)) / dt;
    } else {
      f.u_t.col(s) = (grid.u.col(s + 1) - grid.u.col(s - 1)) / (2.0 * dt);
    }
  }

  f.terms = enumerate_dictionary();
  f.values.reserve(f.terms.size());
  for (const FeatureTerm& term : f.terms) {
    Matrix v = Matrix::Ones(n_out, n_t);
    for (int order : term.orders)
      v = v.cwiseProduct(f.derivative[static_cast<std::size_t>(order)]);
    f.values.push_back(std::move(v));
  }
  return f;
}

/// Quadratic splines, 7 spatial x 8 temporal functions: block size 56.
inline BsplineBasis2d default_basis(double t_max) {
  return {BsplineBasis1d(2, 7, -1.0, 1.0), BsplineBasis1d(2, 8, 0.0, t_max)};
}

struct BlockSystem {
  BlockMatrix a;          // columns normalized
  Vector y;               // vectorized u_t over the retained grid points
  Vector scales;          // per-column norms before normalization
  std::vector<FeatureTerm> terms;
  int n_space = 0;        // retained spatial samples
  int n_time = 0;         // retained temporal samples (endpoints dropped)
};

/// Rows iterate the retained grid points space-major; the first and last
/// time samples are dropped so y only contains centered u_t values. Block g,
/// column (i, j) holds feature_g(x, t) * B_i(x) * B_j(t).
inline BlockSystem assemble_block_system(const FeatureData& f, const PdeGrid& grid,
                                         const BsplineBasis2d& basis) {
  const int n_space = static_cast<int>(grid.u.rows());
  const int n_t_all = static_cast<int>(grid.u.cols());
  gpsp::detail::require(n_t_all >= 3, "assemble_block_system: too few time samples");
  const int n_time = n_t_all - 2;
  const int n_rows = n_space * n_time;
  const int block = basis.size();
  const int n_terms = static_cast<int>(f.terms.size());

  // Per-point basis values, shared across blocks.
  Matrix bx(n_space, basis.space.size());
  for (int i = 0; i < n_space; ++i)
    bx.row(i) = basis.space.eval(grid.x_min + i * grid.x_step).transpose();
  Matrix bt(n_time, basis.time.size());
  for (int s = 0; s < n_time; ++s)
    bt.row(s) = basis.time.eval(grid.t_min + (s + 1) * grid.t_step).transpose();

  Matrix a(n_rows, static_cast<Eigen::Index>(n_terms) * block);
  Vector y(n_rows);
  for (int i = 0; i < n_space; ++i)
    for (int s = 0; s < n_time; ++s) y(i * n_time + s) = f.u_t(i, s + 1);

  for (int g = 0; g < n_terms; ++g) {
    const Matrix& val = f.values[static_cast<std::size_t>(g)];
    for (int bi = 0; bi < basis.space.size(); ++bi) {
      for (int bj = 0; bj < basis.time.size(); ++bj) {
        const Eigen::Index col =
            static_cast<Eigen::Index>(g) * block + bi * basis.time.size() + bj;
        for (int i = 0; i < n_space; ++i)
          for (int s = 0; s < n_time; ++s)
            a(i * n_time + s, col) = val(i, s + 1) * bx(i, bi) * bt(s, bj);
      }
    }
  }

  auto [normalized, scales] = column_normalize(BlockMatrix(std::move(a), n_terms, block));
  BlockSystem sys{std::move(normalized), std::move(y), std::move(scales),
                  f.terms, n_space, n_time};
  return sys;
}

/// Runs the requested pursuit on the assembled system and maps the selected
/// blocks back to dictionary terms (canonical order).
inline std::vector<FeatureTerm> identify_pde(const BlockSystem& sys, int k,
                                             const CriteriaSpec& algorithm,
                                             int max_iter = 50) {
  const PursuitResult r = generic_pursuit(sys.a, sys.y, k, algorithm, max_iter);
  std::vector<FeatureTerm> out;
  for (int g : r.outcome.support) out.push_back(sys.terms[static_cast<std::size_t>(g)]);
  return out;
}

}  // namespace gpsp::pde
