#include "subcurv/curvature.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace subcurv {

MNCubics mn_from_structure(const StructureFields& sc) {
  auto c = [&](int i, int j, int k) { return sc.c(i, j, k); };
  std::vector<Expr> m{
      c(1, 4, 3),
      c(2, 4, 3) + c(1, 4, 4) - c(1, 3, 3),
      c(2, 4, 4) - c(2, 3, 3) - c(1, 3, 4),
      -c(2, 3, 4),
  };
  std::vector<Expr> n{
      -c(1, 4, 2),
      c(1, 3, 2) + c(1, 4, 1) - c(2, 4, 2),
      c(2, 4, 1) + c(2, 3, 2) - c(1, 3, 1),
      -c(2, 3, 1),
  };
  return {LambdaPoly::from_coeffs(m), LambdaPoly::from_coeffs(n)};
}

namespace {

Expr dir_deriv(const FrameRow& e, const Expr& f, const Derivation& D) {
  Expr out;
  for (int l = 0; l < 5; ++l) {
    if (e[std::size_t(l)].is_zero()) continue;
    Expr t = e[std::size_t(l)] * D.d(f, l);
    out = out.empty() ? t : out + t;
  }
  if (out.empty()) out = Expr::constant(0.0, f.table() ? f.table() : e[0].table());
  return out;
}

LambdaPoly frame_deriv(const FrameRow& e, const LambdaPoly& p, const Derivation& D) {
  return p.map_coeffs([&](const Expr& c) {
    return c.is_zero() ? c : dir_deriv(e, c, D);
  });
}

}  // namespace

LambdaPoly curvature_quartic(const FrameField& fr, const MNCubics& mn,
                             const Derivation& D) {
  const LambdaPoly& m = mn.m;
  const LambdaPoly& n = mn.n;
  const TablePtr& table = m.table();
  LambdaPoly lam = LambdaPoly::from_coeffs(
      {Expr::constant(0.0, table), Expr::constant(1.0, table)});
  LambdaPoly W = frame_deriv(fr.e[1], n, D) + lam * frame_deriv(fr.e[2], n, D) -
                 lam * frame_deriv(fr.e[3], m, D) + frame_deriv(fr.e[4], m, D) +
                 wronskian(m, n);
  return W;
}

LambdaPoly inplane_quadratic(const StructureFields& sc, int k) {
  return LambdaPoly::from_coeffs(
      {-sc.c(1, 4, k), sc.c(1, 3, k) - sc.c(2, 4, k), sc.c(2, 3, k)});
}

LambdaPoly reduced_curvature_quartic(const StructureFields& sc,
                                     const LambdaPoly& raw) {
  return raw + inplane_quadratic(sc, 1) * inplane_quadratic(sc, 3) +
         inplane_quadratic(sc, 2) * inplane_quadratic(sc, 4);
}

NormalLift normal_lift(const Chart& ch, const Derivation& D, const Congruence& cg) {
  if (ch.dim() != 5) throw DimensionMismatch("congruence chart must have 5 coordinates");
  if (cg.a.degree() > 1 || cg.b.degree() > 1 || cg.c.degree() > 1)
    throw DomainError("normal lift requires a congruence affine in the spectral parameter");

  const TablePtr& table = ch.table;
  Expr zero = Expr::constant(0.0, table);
  Expr one = Expr::constant(1.0, table);
  LambdaPoly lz = LambdaPoly::of(zero);

  NormalLift out;
  out.X.comp = {LambdaPoly::of(one), lz, cg.a, cg.b, LambdaPoly::of(ch.coord(2))};
  out.X.spectral = lz;
  out.Y.comp = {lz, LambdaPoly::of(one), cg.b, cg.c, LambdaPoly::of(ch.coord(3))};
  out.Y.spectral = lz;

  Expr al = cg.a.coeff(1), bl = cg.b.coeff(1), cl = cg.c.coeff(1);
  Expr det = al * cl - bl * bl;
  if (det.is_zero())
    throw DegenerateCongruence("a_λ c_λ − b_λ² vanishes identically");
  out.nondegeneracy = det;

  LambdaPoly R1 = apply(out.X, cg.b, D) - apply(out.Y, cg.a, D);
  LambdaPoly R2 = apply(out.X, cg.c, D) - apply(out.Y, cg.b, D);

  auto over_det = [&](const LambdaPoly& p) {
    return p.map_coeffs([&](const Expr& e) { return e.is_zero() ? e : e / det; });
  };
  out.m = over_det(R1 * bl - R2 * al);
  out.n = over_det(R1 * cl - R2 * bl);
  out.X.spectral = out.m;
  out.Y.spectral = out.n;
  return out;
}

LaxPair::LaxPair(VectorFieldL X, VectorFieldL Y, const Derivation& D)
    : X_(std::move(X)), Y_(std::move(Y)), C_(commutator(X_, Y_, D)) {}

double LaxPair::defect(const Environment& env, double lambda) const {
  Eigen::Matrix<double, 6, 1> x, y, c;
  x.head<5>() = X_.eval_at(env, lambda);
  y.head<5>() = Y_.eval_at(env, lambda);
  c.head<5>() = C_.eval_at(env, lambda);
  x(5) = X_.eval_spectral(env, lambda);
  y(5) = Y_.eval_spectral(env, lambda);
  c(5) = C_.eval_spectral(env, lambda);

  Eigen::Matrix<double, 6, 2> A;
  A.col(0) = x;
  A.col(1) = y;
  Eigen::JacobiSVD<Eigen::Matrix<double, 6, 2>> svd(A);
  double s0 = svd.singularValues()(0), s1 = svd.singularValues()(1);
  if (s1 <= 1e-12 * (s0 > 0 ? s0 : 1.0))
    throw DependentGenerators("pair spans less than two directions at the sample point");

  Eigen::Matrix<double, 6, 1> resid = c - A * A.colPivHouseholderQr().solve(c);
  double scale = 1.0 + std::max({x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff(),
                                 c.cwiseAbs().maxCoeff()});
  return resid.cwiseAbs().maxCoeff() / scale;
}

}  // namespace subcurv
