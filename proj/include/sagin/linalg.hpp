#pragma once

#include <Eigen/SparseCore>

#include "sagin/types.hpp"

namespace sagin::linalg {

// Deterministic dense complex kernel shared by every scheme. Backed by
// Eigen decompositions; all tolerances are relative to the largest
// singular value unless stated otherwise.

inline constexpr double kRankTol = 1e-10;

struct SvdResult {
  CMat u;             // left singular vectors
  Eigen::VectorXd s;  // nonincreasing, nonnegative
  CMat v;             // right singular vectors; a = u * s.asDiagonal() * v^H
};

// Thin SVD. Throws std::invalid_argument on empty or non-finite input.
SvdResult svd(const CMat& a);

// Moore-Penrose pseudoinverse with singular values below rel_tol * s_max
// treated as zero.
CMat pinv(const CMat& a, double rel_tol = kRankTol);

CMat kron(const CMat& a, const CMat& b);

// Column-major stacking (project-wide vec convention).
CVec vec(const CMat& a);
CMat unvec(const CVec& v, Eigen::Index rows, Eigen::Index cols);

// Sparse 0/1 selector of size L^2 x L mapping a length-L vector to the
// vectorization of the corresponding diagonal L x L matrix: the p-th
// column has its single 1 at row pL - L + p (1-based).
Eigen::SparseMatrix<double> selector_beta(int l);

// Count of singular values above tol * s_max.
int rank_tol(const CMat& a, double tol = kRankTol);

bool all_finite(const CMat& a);

}  // namespace sagin::linalg
