#pragma once

// Small dense linear algebra helpers shared by the geometry modules. All are
// thin wrappers over Eigen with the rank/kernel thresholds used across the
// library pinned in one place.

#include <Eigen/Dense>

#include "subcurv/error.hpp"

namespace subcurv {

// Numerical rank via SVD: singular values above 1e-10 * sigma_max count.
int rank_svd(const Eigen::MatrixXd& A);

// One-dimensional left kernel of A (covector k with k*A = 0), normalized so
// its largest-magnitude entry is +1. Throws RankDeficient / RankFull when the
// kernel is not exactly one-dimensional.
Eigen::RowVectorXd left_kernel_1d(const Eigen::MatrixXd& A);

// Orthonormal basis of the column space (rank r columns) via column-pivoted QR.
Eigen::MatrixXd column_space(const Eigen::MatrixXd& A);

// Moore-Penrose pseudoinverse with the same singular-value cutoff as rank_svd.
Eigen::MatrixXd pinv(const Eigen::MatrixXd& A);

// Pfaffian of a 4x4 antisymmetric matrix:
//   Pf = O01 O23 - O02 O13 + O03 O12.
double pfaffian4(const Eigen::Matrix4d& O);

// Eigenvalue signature (negatives, zeros, positives) of a symmetric matrix,
// with |eig| <= 1e-10 * max|eig| counted as zero.
struct Signature {
  int neg = 0;
  int zero = 0;
  int pos = 0;
};
Signature signature(const Eigen::MatrixXd& S);

}  // namespace subcurv
