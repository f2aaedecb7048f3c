#pragma once

#include "gpsp/block_linalg.hpp"

#include <cmath>
#include <vector>

namespace gpsp::pde {

/// Open-uniform B-spline family on [a, b]: the first and last knots repeat
/// degree+1 times, interior knots are equally spaced, and the basis forms a
/// partition of unity on the whole interval. Evaluation uses the Cox-de Boor
/// triangular scheme over the degree+1 functions active on a span.
class BsplineBasis1d {
 public:
  BsplineBasis1d(int degree, int n_basis, double a, double b)
      : degree_(degree), n_(n_basis), a_(a), b_(b) {
    gpsp::detail::require(degree >= 0, "BsplineBasis1d: negative degree");
    gpsp::detail::require(n_basis >= degree + 1, "BsplineBasis1d: too few basis functions");
    gpsp::detail::require(a < b, "BsplineBasis1d: empty interval");
    const int spans = n_basis - degree;  // interior intervals
    knots_.resize(static_cast<std::size_t>(n_basis + degree + 1));
    for (int i = 0; i <= degree; ++i) {
      knots_[static_cast<std::size_t>(i)] = a;
      knots_[knots_.size() - 1 - static_cast<std::size_t>(i)] = b;
    }
    for (int i = 1; i < spans; ++i)
      knots_[static_cast<std::size_t>(degree + i)] = a + (b - a) * i / spans;
  }

  int size() const { return n_; }
  int degree() const { return degree_; }
  double domain_min() const { return a_; }
  double domain_max() const { return b_; }

  /// All n basis values at x; at most degree+1 are nonzero.
  Vector eval(double x) const {
    gpsp::detail::require(x >= a_ - 1e-12 && x <= b_ + 1e-12,
                          "BsplineBasis1d::eval: point outside domain");
    x = std::min(std::max(x, a_), b_);
    const int span = find_span(x);
    std::vector<double> active(static_cast<std::size_t>(degree_) + 1);
    basis_on_span(span, x, active);
    Vector out = Vector::Zero(n_);
    for (int r = 0; r <= degree_; ++r) out(span - degree_ + r) = active[static_cast<std::size_t>(r)];
    return out;
  }

 private:
  // Index i with knots[i] <= x < knots[i+1], clamped to the last span at b.
  int find_span(double x) const {
    if (x >= b_) return n_ - 1;
    int lo = degree_, hi = n_;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      (x < knots_[static_cast<std::size_t>(mid)] ? hi : lo) = mid;
    }
    return lo;
  }

  void basis_on_span(int span, double x, std::vector<double>& n_vals) const {
    std::vector<double> left(static_cast<std::size_t>(degree_) + 1);
    std::vector<double> right(static_cast<std::size_t>(degree_) + 1);
    n_vals[0] = 1.0;
    for (int j = 1; j <= degree_; ++j) {
      left[static_cast<std::size_t>(j)] = x - knots_[static_cast<std::size_t>(span + 1 - j)];
      right[static_cast<std::size_t>(j)] = knots_[static_cast<std::size_t>(span + j)] - x;
      double saved = 0.0;
      for (int r = 0; r < j; ++r) {
        const double denom = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
        const double tmp = denom == 0.0 ? 0.0 : n_vals[static_cast<std::size_t>(r)] / denom;
        n_vals[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r + 1)] * tmp;
        saved = left[static_cast<std::size_t>(j - r)] * tmp;
      }
      n_vals[static_cast<std::size_t>(j)] = saved;
    }
  }

  int degree_;
  int n_;
  double a_, b_;
  std::vector<double> knots_;
};

/// Tensor product of a spatial and a temporal family; value index is
/// i * time.size() + j for B_i(x) * B_j(t).
struct BsplineBasis2d {
  BsplineBasis1d space;
  BsplineBasis1d time;

  int size() const { return space.size() * time.size(); }

  Vector eval(double x, double t) const {
    const Vector bx = space.eval(x);
    const Vector bt = time.eval(t);
    Vector out(size());
    for (int i = 0; i < space.size(); ++i)
      for (int j = 0; j < time.size(); ++j) out(i * time.size() + j) = bx(i) * bt(j);
    return out;
  }
};

}  // namespace gpsp::pde
