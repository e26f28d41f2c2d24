#include <doctest.h>

#include "sagin/linalg.hpp"
#include "sagin/rng.hpp"

using namespace sagin;

namespace {

CMat random_matrix(int rows, int cols, Rng& rng) {
  CMat m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.circular_gaussian(1.0);
  return m;
}

}  // namespace

TEST_SUITE("linalg") {

TEST_CASE("svd of the identity") {
  const auto dec = linalg::svd(CMat::Identity(3, 3));
  for (int i = 0; i < 3; ++i) CHECK(dec.s(i) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd reconstruction and unitarity") {
  Rng rng(1);
  const CMat a = random_matrix(4, 4, rng);
  const auto dec = linalg::svd(a);
  const CMat rebuilt = dec.u * dec.s.asDiagonal() * dec.v.adjoint();
  CHECK((a - rebuilt).norm() / a.norm() <= 1e-12);
  CHECK((dec.u.adjoint() * dec.u - CMat::Identity(4, 4)).norm() <= 1e-10);
  CHECK((dec.v.adjoint() * dec.v - CMat::Identity(4, 4)).norm() <= 1e-10);
  for (int i = 1; i < dec.s.size(); ++i) CHECK(dec.s(i) <= dec.s(i - 1));
}

TEST_CASE("rank-one outer product has a single singular value") {
  Rng rng(2);
  const CMat a = random_matrix(5, 1, rng) * random_matrix(1, 4, rng);
  const auto dec = linalg::svd(a);
  int above = 0;
  for (int i = 0; i < dec.s.size(); ++i)
    if (dec.s(i) > 1e-10 * dec.s(0)) ++above;
  CHECK(above == 1);
}

TEST_CASE("svd rejects non-finite input") {
  CMat a = CMat::Zero(2, 2);
  a(0, 0) = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
  CHECK_THROWS_AS(linalg::svd(a), std::invalid_argument);
}

TEST_CASE("pinv right-inverts a full-row-rank matrix") {
  Rng rng(3);
  const CMat a = random_matrix(3, 5, rng);
  CHECK((a * linalg::pinv(a) - CMat::Identity(3, 3)).norm() <= 1e-9);
}

TEST_CASE("pinv is an involution and maps zero to zero") {
  Rng rng(4);
  const CMat a = random_matrix(4, 6, rng);
  CHECK((linalg::pinv(linalg::pinv(a)) - a).norm() / a.norm() <= 1e-9);
  const CMat z = CMat::Zero(3, 2);
  CHECK(linalg::pinv(z).norm() == 0.0);
  CHECK(linalg::pinv(z).rows() == 2);
  CHECK(linalg::pinv(z).cols() == 3);
}

TEST_CASE("kron block layout and dimensions") {
  Rng rng(5);
  const CMat b = random_matrix(3, 3, rng);
  const CMat k = linalg::kron(CMat::Identity(2, 2), b);
  CHECK((k.topLeftCorner(3, 3) - b).norm() == 0.0);
  CHECK((k.bottomRightCorner(3, 3) - b).norm() == 0.0);
  CHECK(k.topRightCorner(3, 3).norm() == 0.0);

  const CMat a = random_matrix(2, 3, rng);
  const CMat c = random_matrix(4, 5, rng);
  CHECK(linalg::kron(a, c).rows() == 8);
  CHECK(linalg::kron(a, c).cols() == 15);
}

TEST_CASE("vec is column-major and linear") {
  CMat a(2, 2);
  a << Complex(1, 0), Complex(3, 0), Complex(2, 0), Complex(4, 0);
  const CVec v = linalg::vec(a);
  CHECK(v(0) == Complex(1, 0));
  CHECK(v(1) == Complex(2, 0));
  CHECK(v(2) == Complex(3, 0));
  CHECK(v(3) == Complex(4, 0));

  Rng rng(6);
  const CMat x = random_matrix(3, 4, rng);
  const CMat y = random_matrix(3, 4, rng);
  CHECK((linalg::vec(x + y) - (linalg::vec(x) + linalg::vec(y))).norm() == 0.0);
  CHECK((linalg::unvec(linalg::vec(x), 3, 4) - x).norm() == 0.0);
}

TEST_CASE("vec of a sandwich equals the kron lift") {
  Rng rng(7);
  const CMat a = random_matrix(3, 3, rng);
  const CMat x = random_matrix(3, 3, rng);
  const CMat b = random_matrix(3, 3, rng);
  const CVec lhs = linalg::vec(a * x * b);
  const CVec rhs = linalg::kron(b.transpose(), a) * linalg::vec(x);
  CHECK((lhs - rhs).norm() / lhs.norm() <= 1e-12);
}

TEST_CASE("selector matrix pins each reflection element") {
  const auto beta2 = linalg::selector_beta(2);
  CHECK(beta2.rows() == 4);
  CHECK(beta2.cols() == 2);
  CHECK(beta2.coeff(0, 0) == 1.0);
  CHECK(beta2.coeff(3, 1) == 1.0);
  CHECK(beta2.sum() == 2.0);

  const auto beta3 = linalg::selector_beta(3);
  CHECK(beta3.coeff(0, 0) == 1.0);
  CHECK(beta3.coeff(4, 1) == 1.0);
  CHECK(beta3.coeff(8, 2) == 1.0);
  CHECK(beta3.sum() == 3.0);

  // Lifting a vector through the selector and unstacking gives diag(alpha).
  Rng rng(8);
  const int l = 5;
  const CVec alpha = random_matrix(l, 1, rng).col(0);
  const CVec lifted = linalg::selector_beta(l).cast<Complex>() * alpha;
  const CMat diag = linalg::unvec(lifted, l, l);
  CHECK((diag - CMat(alpha.asDiagonal())).norm() == 0.0);
}

TEST_CASE("rank with tolerance") {
  CHECK(linalg::rank_tol(CMat::Identity(4, 4)) == 4);
  Rng rng(9);
  const CMat a = random_matrix(3, 5, rng);
  CMat stacked(6, 5);
  stacked << a, a;
  CHECK(linalg::rank_tol(stacked) == linalg::rank_tol(a));
  CHECK(linalg::rank_tol(random_matrix(4, 7, rng)) == 4);
}

TEST_CASE("kernel contracts hold on a thousand random instances") {
  Rng rng(10);
  for (int trial = 0; trial < 1000; ++trial) {
    const int rows = 1 + static_cast<int>(rng.uniform() * 32);
    const int cols = 1 + static_cast<int>(rng.uniform() * 32);
    const CMat a = random_matrix(rows, cols, rng);

    const auto dec = linalg::svd(a);
    CHECK((dec.u * dec.s.asDiagonal() * dec.v.adjoint() - a).norm() / a.norm() <= 1e-11);

    const CMat p = linalg::pinv(a);
    CHECK((a * p * a - a).norm() / a.norm() <= 1e-9);
    CHECK((p * a * p - p).norm() / p.norm() <= 1e-9);
    CHECK(((a * p).adjoint() - a * p).norm() <= 1e-9 * (1.0 + (a * p).norm()));
    CHECK(((p * a).adjoint() - p * a).norm() <= 1e-9 * (1.0 + (p * a).norm()));
  }
}

TEST_CASE("vec identity on random shapes") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.uniform() * 6);
    const int k = 1 + static_cast<int>(rng.uniform() * 6);
    const int q = 1 + static_cast<int>(rng.uniform() * 6);
    const CMat a = random_matrix(m, k, rng);
    const CMat x = random_matrix(k, q, rng);
    const CMat b = random_matrix(q, m, rng);
    const CVec lhs = linalg::vec(a * x * b);
    const CVec rhs = linalg::kron(b.transpose(), a) * linalg::vec(x);
    CHECK((lhs - rhs).norm() <= 1e-12 * (1.0 + lhs.norm()));
  }
}

}  // TEST_SUITE
