#include <catch2/catch.hpp>

#include "gpsp/block_linalg.hpp"
#include "gpsp/worked_examples.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace gpsp;

TEST_CASE("BlockMatrix validates its invariants", "[block_linalg]") {
  Matrix m = Matrix::Zero(3, 6);
  REQUIRE_NOTHROW(BlockMatrix(m, 3, 2));
  REQUIRE_THROWS_AS(BlockMatrix(m, 2, 2), std::invalid_argument);  // 2*2 != 6
  REQUIRE_THROWS_AS(BlockMatrix(m, 0, 2), std::invalid_argument);
  Matrix bad = m;
  bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(BlockMatrix(bad, 3, 2), std::invalid_argument);
}

TEST_CASE("BlockSignal block support", "[block_linalg]") {
  Vector c(6);
  c << 0, 0, 1, 0, 0, -2;
  BlockSignal s(c, 2);
  REQUIRE(s.n_blocks() == 3);
  REQUIRE(s.block_support() == BlockSupport({1, 2}));
  REQUIRE_THROWS_AS(BlockSignal(Vector::Zero(5), 2), std::invalid_argument);
}

TEST_CASE("BlockSupport rejects duplicates and disorder", "[block_linalg]") {
  REQUIRE_THROWS_AS(BlockSupport({1, 1}), std::invalid_argument);
  REQUIRE_THROWS_AS(BlockSupport({2, 1}), std::invalid_argument);
  REQUIRE(BlockSupport::from_unsorted({3, 1, 3}) == BlockSupport({1, 3}));
}

TEST_CASE("block_submatrix concatenates blocks in increasing order", "[block_linalg]") {
  const Matrix m = oracles::random_matrix(4, 6, 11);
  const BlockMatrix a(m, 3, 2);

  SECTION("subset") {
    const Matrix sub = block_submatrix(a, BlockSupport({0, 2}));
    REQUIRE(sub.cols() == 4);
    REQUIRE((sub.leftCols(2) - m.leftCols(2)).norm() == 0.0);
    REQUIRE((sub.rightCols(2) - m.rightCols(2)).norm() == 0.0);
  }
  SECTION("all blocks give the matrix back") {
    REQUIRE((block_submatrix(a, BlockSupport({0, 1, 2})) - m).norm() == 0.0);
  }
  SECTION("reference system block") {
    const BlockMatrix ref = examples::inclusion_contrast_system();
    const Matrix f2 = block_submatrix(ref, BlockSupport({1}));
    Matrix expected(3, 2);
    const double s = 1.0 / std::sqrt(2.0);
    expected << s, 0, s, 1, 0, 0;
    REQUIRE((f2 - expected).norm() == Approx(0.0).margin(1e-15));
  }
  SECTION("errors") {
    REQUIRE_THROWS_AS(block_submatrix(a, BlockSupport()), std::invalid_argument);
    REQUIRE_THROWS_AS(block_submatrix(a, BlockSupport({3})), std::invalid_argument);
  }
}

TEST_CASE("least_squares", "[block_linalg]") {
  SECTION("orthonormal columns with y in the range recover exactly") {
    Matrix b(4, 2);
    b << 1, 0, 0, 1, 0, 0, 0, 0;
    Vector y(4);
    y << 3, -2, 0, 0;
    const Vector x = least_squares(b, y);
    REQUIRE(x(0) == Approx(3.0).margin(1e-14));
    REQUIRE(x(1) == Approx(-2.0).margin(1e-14));
    REQUIRE((y - b * x).norm() == Approx(0.0).margin(1e-14));
  }
  SECTION("clean reference system matches the direct 4x4 solve") {
    const BlockMatrix a = examples::exclusion_contrast_system();
    const Vector y = examples::exclusion_contrast_clean();
    const Vector x = least_squares(a.entries(), y);
    const Vector expected = oracles::direct_solve(a.entries(), y);
    REQUIRE((x - expected).norm() < 1e-12);
    Vector truth(4);
    truth << 1, 1, 0, 0;
    REQUIRE((x - truth).norm() < 1e-12);
  }
  SECTION("random full-rank system matches the normal equations") {
    const Matrix b = oracles::random_matrix(20, 6, 23);
    const Vector y = oracles::random_vector(20, 23);
    const Vector x = least_squares(b, y);
    const Vector expected = oracles::normal_equation_solve(b, y);
    REQUIRE((x - expected).norm() / expected.norm() < 1e-10);
  }
  SECTION("all-zero matrix yields the zero vector") {
    const Vector x = least_squares(Matrix::Zero(4, 3), oracles::random_vector(4, 5));
    REQUIRE(x.norm() == 0.0);
  }
  SECTION("dimension mismatch") {
    REQUIRE_THROWS_AS(least_squares(Matrix::Zero(4, 3), Vector::Zero(5)),
                      std::invalid_argument);
  }
}

TEST_CASE("project and residual", "[block_linalg]") {
  const Matrix b = oracles::random_matrix(10, 3, 31);

  SECTION("vectors in the column space are fixed") {
    const Vector v = b * oracles::random_vector(3, 32);
    REQUIRE((project(v, b) - v).norm() <= 1e-10 * v.norm());
    REQUIRE(residual(v, b).norm() <= 1e-10 * v.norm());
  }
  SECTION("orthogonal vectors map to zero") {
    Matrix b2(4, 2);
    b2 << 1, 0, 0, 1, 0, 0, 0, 0;
    Vector v(4);
    v << 0, 0, 2, -5;
    REQUIRE(project(v, b2).norm() == Approx(0.0).margin(1e-14));
    REQUIRE((residual(v, b2) - v).norm() == Approx(0.0).margin(1e-14));
  }
  SECTION("reference projection norm") {
    const BlockMatrix ref = examples::inclusion_contrast_system();
    const Vector d = examples::inclusion_contrast_target();
    const double n = project(d, block_submatrix(ref, BlockSupport({1}))).norm();
    REQUIRE(n == Approx(std::sqrt(16.5)).margin(1e-12));  // prints as 4.06
    REQUIRE(n == Approx(4.06).margin(5e-3));
  }
  SECTION("projection of the target onto its own block is lossless") {
    const BlockMatrix ref = examples::inclusion_contrast_system();
    const Vector d = examples::inclusion_contrast_target();
    const Matrix f1 = block_submatrix(ref, BlockSupport({0}));
    // ||d||^2 = 17 and the projection magnitude is sqrt(17).
    REQUIRE(residual(d, f1).squaredNorm() == Approx(d.squaredNorm() - 17.0).margin(1e-10));
  }
  SECTION("zero matrix leaves the vector unchanged") {
    const Vector v = oracles::random_vector(6, 33);
    REQUIRE((residual(v, Matrix::Zero(6, 2)) - v).norm() == 0.0);
  }
  SECTION("dimension mismatch") {
    REQUIRE_THROWS_AS(project(Vector::Zero(3), b), std::invalid_argument);
    REQUIRE_THROWS_AS(residual(Vector::Zero(3), b), std::invalid_argument);
  }
}

TEST_CASE("projection properties on random instances", "[block_linalg][property]") {
  for (std::uint64_t trial = 0; trial < 25; ++trial) {
    const int rows = 5 + static_cast<int>(trial % 7);
    const int cols = 1 + static_cast<int>(trial % 4);
    const Matrix b = oracles::random_matrix(rows, cols, 100 + trial);
    const Vector v = oracles::random_vector(rows, 200 + trial);
    const Vector p = project(v, b);
    const Vector r = residual(v, b);

    // Idempotence.
    REQUIRE((project(p, b) - p).norm() <= 1e-10 * std::max(1.0, p.norm()));
    // Orthogonal decomposition.
    REQUIRE(v.squaredNorm() ==
            Approx(p.squaredNorm() + r.squaredNorm()).epsilon(1e-10));
    // Residual orthogonal to the column space.
    const auto [smin, smax] = extreme_singular_values(b);
    REQUIRE((b.transpose() * r).norm() <= 1e-8 * v.norm() * smax + 1e-13);
    // Projection never grows the norm.
    REQUIRE(p.norm() <= v.norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("argmin residual equals argmax projection over blocks", "[block_linalg][property]") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const BlockMatrix a(oracles::random_matrix(8, 10, 300 + trial), 5, 2);
    const Vector d = oracles::random_vector(8, 400 + trial);
    int argmin_resid = 0, argmax_proj = 0;
    double best_resid = std::numeric_limits<double>::infinity(), best_proj = -1.0;
    for (int g = 0; g < a.n_blocks(); ++g) {
      const double r = residual(d, a.block(g)).norm();
      const double p = project(d, a.block(g)).norm();
      if (r < best_resid) {
        best_resid = r;
        argmin_resid = g;
      }
      if (p > best_proj) {
        best_proj = p;
        argmax_proj = g;
      }
    }
    REQUIRE(argmin_resid == argmax_proj);
  }
}

TEST_CASE("least_squares satisfies the normal equations", "[block_linalg][property]") {
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const Matrix b = oracles::random_matrix(15, 4, 500 + trial);
    const Vector y = oracles::random_vector(15, 600 + trial);
    const Vector x = least_squares(b, y);
    const double lhs = (b.transpose() * b * x - b.transpose() * y).norm();
    REQUIRE(lhs <= 1e-8 * (b.transpose() * y).norm());
  }
}

TEST_CASE("column_normalize", "[block_linalg]") {
  SECTION("unit columns are unchanged") {
    Matrix m(2, 2);
    m << 1, 0, 0, 1;
    const auto [normed, scales] = column_normalize(BlockMatrix(m, 2, 1));
    REQUIRE((normed.entries() - m).norm() == 0.0);
    REQUIRE((scales - Vector::Ones(2)).norm() == 0.0);
  }
  SECTION("constant column") {
    Matrix m = Matrix::Constant(4, 1, 2.0);
    const auto [normed, scales] = column_normalize(BlockMatrix(m, 1, 1));
    REQUIRE(normed.entries()(0, 0) == Approx(0.5));
    REQUIRE(scales(0) == Approx(4.0));
  }
  SECTION("reconstruction identity on a random matrix") {
    const Matrix m = oracles::random_matrix(6, 8, 71);
    const BlockMatrix a(m, 4, 2);
    const auto [normed, scales] = column_normalize(a);
    const Matrix back = normed.entries() * scales.asDiagonal();
    REQUIRE((back - m).norm() <= 1e-12 * m.norm());
    for (int j = 0; j < 8; ++j)
      REQUIRE(normed.entries().col(j).norm() == Approx(1.0).margin(1e-12));
  }
  SECTION("zero columns stay zero with scale one") {
    Matrix m = Matrix::Zero(3, 2);
    m(0, 1) = 2.0;
    const auto [normed, scales] = column_normalize(BlockMatrix(m, 1, 2));
    REQUIRE(normed.entries().col(0).norm() == 0.0);
    REQUIRE(scales(0) == 1.0);
    REQUIRE(scales(1) == Approx(2.0));
  }
}

TEST_CASE("extreme_singular_values", "[block_linalg]") {
  SECTION("identity") {
    const auto [lo, hi] = extreme_singular_values(Matrix::Identity(3, 3));
    REQUIRE(lo == Approx(1.0));
    REQUIRE(hi == Approx(1.0));
  }
  SECTION("diagonal") {
    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    const auto [lo, hi] = extreme_singular_values(d);
    REQUIRE(lo == Approx(2.0));
    REQUIRE(hi == Approx(3.0));
  }
  SECTION("matches the Gram eigenvalue route") {
    const Matrix b = oracles::random_matrix(10, 4, 81);
    const auto [lo, hi] = extreme_singular_values(b);
    const auto [olo, ohi] = oracles::gram_singular_values(b);
    REQUIRE(lo == Approx(olo).epsilon(1e-10));
    REQUIRE(hi == Approx(ohi).epsilon(1e-10));
  }
  SECTION("wide matrices have a kernel") {
    const auto [lo, hi] = extreme_singular_values(oracles::random_matrix(3, 5, 91));
    REQUIRE(lo == 0.0);
    REQUIRE(hi > 0.0);
  }
}
