#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gpsp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when a brute-force enumeration would exceed its guard limit.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

inline double default_rank_tol(const Matrix& b) {
  return static_cast<double>(std::max(b.rows(), b.cols())) *
         std::numeric_limits<double>::epsilon();
}

}  // namespace detail

/// Strictly increasing set of block indices.
class BlockSupport {
 public:
  BlockSupport() = default;

  explicit BlockSupport(std::vector<int> indices) : indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      detail::require(indices_[i] >= 0, "BlockSupport: negative index");
      if (i > 0)
        detail::require(indices_[i] > indices_[i - 1],
                        "BlockSupport: indices must be strictly increasing");
    }
  }

  static BlockSupport from_unsorted(std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    return BlockSupport(std::move(indices));
  }

  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  int operator[](int i) const { return indices_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& indices() const { return indices_; }

  bool contains(int g) const {
    return std::binary_search(indices_.begin(), indices_.end(), g);
  }

  bool operator==(const BlockSupport& other) const { return indices_ == other.indices_; }
  bool operator!=(const BlockSupport& other) const { return !(*this == other); }

  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

 private:
  std::vector<int> indices_;
};

inline BlockSupport support_union(const BlockSupport& a, const BlockSupport& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return BlockSupport(std::move(out));
}

inline BlockSupport support_difference(const BlockSupport& a, const BlockSupport& b) {
  std::vector<int> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return BlockSupport(std::move(out));
}

inline BlockSupport support_intersection(const BlockSupport& a, const BlockSupport& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return BlockSupport(std::move(out));
}

/// Dense N x (G*M) matrix carrying its block structure: G blocks of M
/// contiguous columns. Immutable after construction; block g occupies
/// columns [g*M, (g+1)*M).
class BlockMatrix {
 public:
  BlockMatrix(Matrix entries, int n_blocks, int block_size)
      : entries_(std::move(entries)), n_blocks_(n_blocks), block_size_(block_size) {
    detail::require(n_blocks_ >= 1, "BlockMatrix: n_blocks must be >= 1");
    detail::require(block_size_ >= 1, "BlockMatrix: block_size must be >= 1");
    detail::require(entries_.rows() >= 1, "BlockMatrix: rows must be >= 1");
    detail::require(entries_.cols() == static_cast<Eigen::Index>(n_blocks_) * block_size_,
                    "BlockMatrix: column count must equal n_blocks * block_size");
    detail::require(entries_.allFinite(), "BlockMatrix: entries must be finite");
  }

  int rows() const { return static_cast<int>(entries_.rows()); }
  int cols() const { return static_cast<int>(entries_.cols()); }
  int n_blocks() const { return n_blocks_; }
  int block_size() const { return block_size_; }
  const Matrix& entries() const { return entries_; }

  Eigen::Ref<const Matrix> block(int g) const {
    detail::require(g >= 0 && g < n_blocks_, "BlockMatrix::block: index out of range");
    return entries_.middleCols(static_cast<Eigen::Index>(g) * block_size_, block_size_);
  }

 private:
  Matrix entries_;
  int n_blocks_;
  int block_size_;
};

/// Length-(G*M) coefficient vector sharing the block partition of a
/// BlockMatrix.
class BlockSignal {
 public:
  BlockSignal() : coeffs_(0), block_size_(1) {}

  BlockSignal(Vector coeffs, int block_size)
      : coeffs_(std::move(coeffs)), block_size_(block_size) {
    detail::require(block_size_ >= 1, "BlockSignal: block_size must be >= 1");
    detail::require(coeffs_.size() % block_size_ == 0,
                    "BlockSignal: length must be divisible by block_size");
  }

  static BlockSignal zero(int n_blocks, int block_size) {
    return BlockSignal(Vector::Zero(static_cast<Eigen::Index>(n_blocks) * block_size),
                       block_size);
  }

  int block_size() const { return block_size_; }
  int n_blocks() const { return static_cast<int>(coeffs_.size()) / block_size_; }
  const Vector& coeffs() const { return coeffs_; }
  Vector& coeffs() { return coeffs_; }

  Eigen::Ref<const Vector> block(int g) const {
    detail::require(g >= 0 && g < n_blocks(), "BlockSignal::block: index out of range");
    return coeffs_.segment(static_cast<Eigen::Index>(g) * block_size_, block_size_);
  }

  Eigen::Ref<Vector> block(int g) {
    detail::require(g >= 0 && g < n_blocks(), "BlockSignal::block: index out of range");
    return coeffs_.segment(static_cast<Eigen::Index>(g) * block_size_, block_size_);
  }

  /// Indices of blocks with any nonzero entry (L1 norm != 0).
  BlockSupport block_support() const {
    std::vector<int> idx;
    for (int g = 0; g < n_blocks(); ++g)
      if (block(g).lpNorm<1>() != 0.0) idx.push_back(g);
    return BlockSupport(std::move(idx));
  }

  /// L2 norm of the entries belonging to blocks in `s`.
  double norm_on(const BlockSupport& s) const {
    double sq = 0.0;
    for (int g : s) sq += block(g).squaredNorm();
    return std::sqrt(sq);
  }

 private:
  Vector coeffs_;
  int block_size_;
};

/// Horizontal concatenation of the blocks indexed by T, in increasing order.
inline Matrix block_submatrix(const BlockMatrix& a, const BlockSupport& t) {
  detail::require(!t.empty(), "block_submatrix: empty support");
  detail::require(t[t.size() - 1] < a.n_blocks(), "block_submatrix: index out of range");
  Matrix out(a.rows(), static_cast<Eigen::Index>(t.size()) * a.block_size());
  for (int i = 0; i < t.size(); ++i)
    out.middleCols(static_cast<Eigen::Index>(i) * a.block_size(), a.block_size()) =
        a.block(t[i]);
  return out;
}

/// Minimum-norm least-squares solution via SVD. Singular values below
/// rank_tol * sigma_max are treated as zero; rank_tol < 0 selects
/// max(rows, cols) * machine epsilon.
inline Vector least_squares(const Matrix& b, const Vector& y, double rank_tol = -1.0) {
  detail::require(b.rows() == y.size(), "least_squares: dimension mismatch");
  if (b.cols() == 0) return Vector(0);
  if (rank_tol < 0.0) rank_tol = detail::default_rank_tol(b);
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rank_tol);
  if (svd.singularValues()(0) == 0.0) return Vector::Zero(b.cols());
  return svd.solve(y);
}

/// Orthogonal projection of v onto the column space of b.
inline Vector project(const Vector& v, const Matrix& b) {
  detail::require(b.rows() == v.size(), "project: dimension mismatch");
  if (b.cols() == 0) return Vector::Zero(v.size());
  Eigen::ColPivHouseholderQR<Matrix> qr(b);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return Vector::Zero(v.size());
  Matrix q = qr.householderQ() * Matrix::Identity(b.rows(), rank);
  return q * (q.transpose() * v);
}

/// v minus its projection onto col(b).
inline Vector residual(const Vector& v, const Matrix& b) {
  return v - project(v, b);
}

/// Rescales every nonzero column to unit L2 norm. Zero columns stay zero
/// with a recorded scale of 1, so the scale vector always reconstructs the
/// input: normalized * diag(scales) == original.
inline std::pair<BlockMatrix, Vector> column_normalize(const BlockMatrix& a) {
  Matrix m = a.entries();
  Vector scales(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const double s = m.col(j).norm();
    if (s == 0.0) {
      scales(j) = 1.0;
    } else {
      scales(j) = s;
      m.col(j) /= s;
    }
  }
  return {BlockMatrix(std::move(m), a.n_blocks(), a.block_size()), std::move(scales)};
}

/// (sigma_min, sigma_max). The minimum counts rank deficiency: a matrix
/// with more columns than rows has a nontrivial kernel, hence sigma_min 0.
inline std::pair<double, double> extreme_singular_values(const Matrix& b) {
  detail::require(b.size() > 0, "extreme_singular_values: empty matrix");
  Eigen::BDCSVD<Matrix> svd(b);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = (b.cols() > b.rows()) ? 0.0 : sv(sv.size() - 1);
  return {smin, smax};
}

}  // namespace gpsp
