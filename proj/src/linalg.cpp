#include "subcurv/linalg.hpp"

#include <cmath>

namespace subcurv {

namespace {
constexpr double kRankTol = 1e-10;
}

int rank_svd(const Eigen::MatrixXd& A) {
  if (A.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  double cut = kRankTol * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r;
  return r;
}

Eigen::RowVectorXd left_kernel_1d(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  double smax = sv.size() ? sv(0) : 0.0;
  double cut = kRankTol * (smax > 0 ? smax : 1.0);
  // Left kernel dimension = rows - rank.
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  int kdim = int(A.rows()) - rank;
  if (kdim < 1) throw RankFull("matrix has no left kernel");
  if (kdim > 1) throw RankDeficient("left kernel is not one-dimensional");
  Eigen::VectorXd k = svd.matrixU().col(A.rows() - 1);
  // Normalize: largest-magnitude entry becomes +1.
  Eigen::Index imax = 0;
  k.cwiseAbs().maxCoeff(&imax);
  k /= k(imax);
  return k.transpose();
}

Eigen::MatrixXd column_space(const Eigen::MatrixXd& A) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(kRankTol);
  int r = int(qr.rank());
  Eigen::MatrixXd Q = qr.householderQ();
  return Q.leftCols(r);
}

Eigen::MatrixXd pinv(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cut = kRankTol * (sv.size() ? sv(0) : 0.0);
  Eigen::VectorXd inv = sv;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    inv(i) = sv(i) > cut ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double pfaffian4(const Eigen::Matrix4d& O) {
  return O(0, 1) * O(2, 3) - O(0, 2) * O(1, 3) + O(0, 3) * O(1, 2);
}

Signature signature(const Eigen::MatrixXd& S) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const auto& ev = es.eigenvalues();
  double m = ev.cwiseAbs().maxCoeff();
  double cut = kRankTol * (m > 0 ? m : 1.0);
  Signature sig;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i)) <= cut)
      ++sig.zero;
    else if (ev(i) < 0)
      ++sig.neg;
    else
      ++sig.pos;
  }
  return sig;
}

}  // namespace subcurv
