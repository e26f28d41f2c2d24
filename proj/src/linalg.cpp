#include "sagin/linalg.hpp"

#include <Eigen/SVD>

#include <stdexcept>
#include <vector>

namespace sagin::linalg {

bool all_finite(const CMat& a) { return a.allFinite(); }

namespace {

// JacobiSVD is the more accurate choice for the small per-link blocks;
// BDCSVD scales to the stacked reflection systems (hundreds of rows).
SvdResult svd_impl(const CMat& a) {
  if (a.size() == 0) throw std::invalid_argument("svd: empty matrix");
  if (!all_finite(a)) throw std::invalid_argument("svd: non-finite input");
  SvdResult out;
  if (a.rows() <= 32 && a.cols() <= 32) {
    Eigen::JacobiSVD<CMat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = dec.matrixU();
    out.s = dec.singularValues();
    out.v = dec.matrixV();
  } else {
    Eigen::BDCSVD<CMat> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    out.u = dec.matrixU();
    out.s = dec.singularValues();
    out.v = dec.matrixV();
  }
  return out;
}

}  // namespace

SvdResult svd(const CMat& a) { return svd_impl(a); }

CMat pinv(const CMat& a, double rel_tol) {
  if (a.size() == 0) throw std::invalid_argument("pinv: empty matrix");
  if (!all_finite(a)) throw std::invalid_argument("pinv: non-finite input");
  const SvdResult dec = svd_impl(a);
  const double smax = dec.s.size() > 0 ? dec.s(0) : 0.0;
  if (smax == 0.0) return CMat::Zero(a.cols(), a.rows());
  const double cut = rel_tol * smax;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(dec.s.size());
  for (Eigen::Index i = 0; i < dec.s.size(); ++i)
    if (dec.s(i) > cut) inv(i) = 1.0 / dec.s(i);
  return dec.v * inv.asDiagonal() * dec.u.adjoint();
}

CMat kron(const CMat& a, const CMat& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (a.rows() != 0 && rows / a.rows() != b.rows())
    throw std::overflow_error("kron: dimension overflow");
  CMat out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVec vec(const CMat& a) {
  return Eigen::Map<const CVec>(a.data(), a.size());
}

CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols) {
  if (rows * cols != v.size()) throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const CMat>(v.data(), rows, cols);
}

Eigen::SparseMatrix<double> selector_beta(int l) {
  if (l < 1) throw std::invalid_argument("selector_beta: l must be >= 1");
  Eigen::SparseMatrix<double> beta(static_cast<Eigen::Index>(l) * l, l);
  std::vector<Eigen::Triplet<double>> ones;
  ones.reserve(l);
  for (int p = 0; p < l; ++p) ones.emplace_back(static_cast<Eigen::Index>(p) * (l + 1), p, 1.0);
  beta.setFromTriplets(ones.begin(), ones.end());
  return beta;
}

int rank_tol(const CMat& a, double tol) {
  if (a.size() == 0) return 0;
  const SvdResult dec = svd_impl(a);
  if (dec.s.size() == 0 || dec.s(0) == 0.0) return 0;
  const double cut = tol * dec.s(0);
  int rank = 0;
  for (Eigen::Index i = 0; i < dec.s.size(); ++i)
    if (dec.s(i) > cut) ++rank;
  return rank;
}

}  // namespace sagin::linalg
