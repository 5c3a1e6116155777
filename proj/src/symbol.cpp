#include "subcurv/symbol.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <complex>

#include "subcurv/linalg.hpp"

namespace subcurv {

SymbolMatrix symbol_matrix(const Expr& F, const JetChart& jc, int dep) {
  SymbolMatrix S;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) S[std::size_t(i)][std::size_t(j)] = Expr::constant(0.0, jc.table());
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) {
      Expr d = F.diff(jc.jet_id(dep, {i, j}));
      if (i == j) {
        S[std::size_t(i)][std::size_t(i)] = d;
      } else {
        Expr half = d * 0.5;
        S[std::size_t(i)][std::size_t(j)] = half;
        S[std::size_t(j)][std::size_t(i)] = half;
      }
    }
  return S;
}

Mat5 eval_symbol(const SymbolMatrix& S, const Environment& env) {
  Mat5 out;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      out(i, j) = S[std::size_t(i)][std::size_t(j)].eval(env);
  return out;
}

CharStructure characteristic_structure(const Mat5& S) {
  Eigen::JacobiSVD<Mat5> svd(S, Eigen::ComputeFullU);
  const auto& sv = svd.singularValues();
  double cut = 1e-10 * sv(0);
  int rank = 0;
  for (int i = 0; i < 5; ++i)
    if (sv(i) > cut) ++rank;
  if (rank == 5) throw RankFull("symbol is nondegenerate, no characteristic direction");
  if (rank < 4) throw RankDeficient("symbol rank below 4");
  CharStructure cs;
  cs.S = S;
  cs.frame = svd.matrixU().leftCols<4>();
  Eigen::Matrix<double, 5, 1> k = svd.matrixU().col(4);
  Eigen::Index imax = 0;
  k.cwiseAbs().maxCoeff(&imax);
  k /= k(imax);
  cs.omega0 = k.transpose();
  return cs;
}

Eigen::Matrix4d induced_metric(const Mat5& S, const Eigen::Matrix<double, 5, 4>& frame) {
  Eigen::Matrix4d G = frame.transpose() * pinv(S) * frame;
  return 0.5 * (G + G.transpose());
}

Eigen::Matrix4d omega_form(const OneForm& omega, const Derivation& D,
                           const Environment& env,
                           const Eigen::Matrix<double, 5, 4>& frame) {
  auto B = d_oneform(omega, D);
  Mat5 M = Mat5::Zero();
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      double b = B[std::size_t(i)][std::size_t(j)].eval(env);
      M(i, j) = b;
      M(j, i) = -b;
    }
  Eigen::Matrix4d O = frame.transpose() * M * frame;
  return 0.5 * (O - O.transpose());
}

Compat compatibility(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O) {
  Eigen::FullPivLU<Eigen::Matrix4d> lu(G);
  if (!lu.isInvertible()) throw SignatureMismatch("metric of the pencil is degenerate");
  Eigen::Matrix4d J = lu.solve(O);
  Eigen::Matrix4d J2 = J * J;
  Compat out;
  out.c = 0.25 * J2.trace();
  double scale = std::max(std::abs(out.c), J2.cwiseAbs().maxCoeff());
  Eigen::Matrix4d R = J2 - out.c * Eigen::Matrix4d::Identity();
  out.defect = scale > 0 ? R.cwiseAbs().maxCoeff() / scale : 0.0;
  out.compatible = out.defect <= 1e-8;
  return out;
}

namespace {

void require_neutral(const Eigen::Matrix4d& G) {
  Signature sig = signature(G);
  if (sig.zero != 0 || sig.neg != 2 || sig.pos != 2)
    throw SignatureMismatch("metric signature is not (2,2)");
}

double pf_checked(const Eigen::Matrix4d& O) {
  double pf = pfaffian4(O);
  double s = O.cwiseAbs().maxCoeff();
  if (std::abs(pf) <= 1e-12 * std::max(1.0, s * s))
    throw DegenerateOmega("2-form of the pencil is degenerate");
  return pf;
}

}  // namespace

double delta_from_pfaffian(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O) {
  require_neutral(G);
  double pf = pf_checked(O);
  return -pf / std::sqrt(G.determinant());
}

double delta_invariant(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O) {
  require_neutral(G);
  pf_checked(O);
  Compat cc = compatibility(G, O);
  if (!cc.compatible) throw NotSolvable("pencil is not compatible, J^2 is not scalar");
  // For a compatible pencil c^2 = Pf(O)^2 / det G, so c itself carries both
  // the magnitude and the orientation-free sign of delta.
  return cc.c;
}

AdaptedPencil adapted_coframe(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O) {
  require_neutral(G);
  pf_checked(O);
  Compat cc = compatibility(G, O);
  if (!cc.compatible) throw NotSolvable("pencil is not compatible, J^2 is not scalar");
  double c = cc.c;
  if (c == 0.0) throw DegenerateOmega("2-form of the pencil is degenerate");
  double s = std::sqrt(std::abs(c));
  Eigen::Matrix4d J = G.fullPivLu().solve(O);
  Eigen::Matrix4d Jh = J / s;

  Eigen::Matrix4d F;
  if (c > 0) {
    Eigen::Matrix4d Pm = 0.5 * (Eigen::Matrix4d::Identity() - Jh);
    Eigen::Matrix4d Pp = 0.5 * (Eigen::Matrix4d::Identity() + Jh);
    Eigen::MatrixXd Lm = column_space(Pm);
    Eigen::MatrixXd Lp = column_space(Pp);
    if (Lm.cols() != 2 || Lp.cols() != 2)
      throw RankDeficient("eigenplanes of the pencil are not two-dimensional");
    Eigen::Vector4d f1 = Lm.col(0), f2 = Lm.col(1);
    Eigen::Matrix2d M;
    M << f1.transpose() * G * Lp.col(0), f1.transpose() * G * Lp.col(1),
         f2.transpose() * G * Lp.col(0), f2.transpose() * G * Lp.col(1);
    Eigen::FullPivLU<Eigen::Matrix2d> lu(M);
    if (!lu.isInvertible())
      throw RankDeficient("metric pairing of the eigenplanes is degenerate");
    Eigen::Vector2d x = lu.solve(Eigen::Vector2d(1, 0));
    Eigen::Vector2d y = lu.solve(Eigen::Vector2d(0, 1));
    F.col(0) = f1;
    F.col(1) = f2;
    F.col(2) = Lp * x;
    F.col(3) = Lp * y;
  } else {
    using C = std::complex<double>;
    Eigen::Matrix4cd A = Jh.cast<C>() - C(0, 1) * Eigen::Matrix4cd::Identity();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(A, Eigen::ComputeFullV);
    Eigen::Matrix<C, 4, 2> Z;
    Z.col(0) = svd.matrixV().col(2);
    Z.col(1) = svd.matrixV().col(3);
    Eigen::Matrix2cd H = Z.adjoint() * G.cast<C>() * Z;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(H);
    double hm = es.eigenvalues()(0), hp = es.eigenvalues()(1);
    if (!(hm < 0 && hp > 0))
      throw SignatureMismatch("hermitian pairing on the eigenplane is not (1,1)");
    Eigen::Vector4cd zp = Z * es.eigenvectors().col(1) / std::sqrt(hp);
    Eigen::Vector4cd zm = Z * es.eigenvectors().col(0) / std::sqrt(-hm);
    Eigen::Vector4cd z = zp + zm;
    Eigen::Vector4cd zq = zp - zm;
    Eigen::Vector4d f1 = z.real(), f4 = z.imag();
    Eigen::Vector4d a2 = zq.real(), b2 = zq.imag();
    Eigen::Matrix2d M;
    M << f1.transpose() * G * a2, f1.transpose() * G * b2,
         f4.transpose() * G * a2, f4.transpose() * G * b2;
    Eigen::FullPivLU<Eigen::Matrix2d> lu(M);
    if (!lu.isInvertible())
      throw RankDeficient("metric pairing of the null planes is degenerate");
    Eigen::Vector2d x = lu.solve(Eigen::Vector2d(1, 0));
    Eigen::Vector4d f3 = x(0) * a2 + x(1) * b2;
    F.col(0) = f1;
    F.col(1) = -Jh * f3;
    F.col(2) = f3;
    F.col(3) = f4;
  }

  // Defensive re-check that the frame reproduces both normal forms.
  Eigen::Matrix4d Gn = F.transpose() * G * F;
  Eigen::Matrix4d On = F.transpose() * O * F;
  Eigen::Matrix4d P = Eigen::Matrix4d::Zero();
  P(0, 2) = P(2, 0) = P(1, 3) = P(3, 1) = 1.0;
  Eigen::Matrix4d T = Eigen::Matrix4d::Zero();
  if (c > 0) {
    T(0, 2) = T(1, 3) = s;
    T(2, 0) = T(3, 1) = -s;
  } else {
    T(0, 1) = T(2, 3) = s;
    T(1, 0) = T(3, 2) = -s;
  }
  double err = std::max((Gn - P).cwiseAbs().maxCoeff(),
                        (On - T).cwiseAbs().maxCoeff() / std::max(s, 1e-300));
  if (err > 1e-6)
    throw NotSolvable("adapted frame failed to reach the normal form");

  AdaptedPencil out;
  out.frame = F;
  out.delta = c;
  out.s = s;
  return out;
}

}  // namespace subcurv
