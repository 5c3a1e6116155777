#include "subcurv/lifts.hpp"

#include <cmath>

#include "subcurv/error.hpp"

namespace subcurv {

Chart projective_chart() {
  return Chart::create({"x0", "x1", "x2", "p1", "p2"});
}

Christoffel::Christoffel(const Chart& ch) : chart_(ch) {
  if (ch.dim() < 3)
    throw DomainError("Christoffel: chart needs at least three coordinates");
  Expr z = Expr::constant(0.0, chart_.table);
  for (auto& slab : g_)
    for (auto& row : slab) row.fill(z);
}

void Christoffel::set(int k, int i, int j, const Expr& e) {
  if (k < 0 || k > 2 || i < 0 || i > 2 || j < 0 || j > 2)
    throw DomainError("Christoffel: index out of range");
  g_[std::size_t(k)][std::size_t(i)][std::size_t(j)] = e;
  g_[std::size_t(k)][std::size_t(j)][std::size_t(i)] = e;
}

Christoffel thomas_symbols(const Christoffel& G) {
  std::array<Expr, 3> tr;
  for (int i = 0; i < 3; ++i)
    tr[std::size_t(i)] = G.at(0, 0, i) + G.at(1, 1, i) + G.at(2, 2, i);
  Christoffel P = G;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        Expr e = G.at(k, i, j);
        if (k == j) e = e - tr[std::size_t(i)] * 0.25;
        if (k == i) e = e - tr[std::size_t(j)] * 0.25;
        P.set(k, i, j, e);
      }
  return P;
}

ProjectiveLift projective_lift(const Christoffel& P) {
  const Chart& ch = P.chart();
  if (ch.dim() != 5)
    throw DomainError("projective_lift: chart must be (x0, x1, x2, p1, p2)");
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j)
        for (int v : P.at(k, i, j).variables())
          if (v != ch.coord_ids[0] && v != ch.coord_ids[1] &&
              v != ch.coord_ids[2])
            throw DomainError(
                "projective_lift: coefficients may use x0, x1, x2 only");

  Expr zero = ch.c(0.0), one = ch.c(1.0);
  // Slope covector of the contact plane dx0 = p1 dx1 + p2 dx2.
  std::array<Expr, 3> th = {ch.c(-1.0), ch.coord(3), ch.coord(4)};
  std::array<Expr, 3> p = {zero, ch.coord(3), ch.coord(4)};

  // A[a][j] = P^c_{aj} th_c + p_j P^c_{a0} th_c: derivative of the slope
  // field of the geodesic family through the contact element.
  std::array<std::array<Expr, 3>, 3> A;
  for (int a = 0; a < 3; ++a)
    for (int j = 1; j <= 2; ++j) {
      Expr s = zero, s0 = zero;
      for (int c = 0; c < 3; ++c) {
        s = s + P.at(c, a, j) * th[std::size_t(c)];
        s0 = s0 + P.at(c, a, 0) * th[std::size_t(c)];
      }
      A[std::size_t(a)][std::size_t(j)] =
          s + p[std::size_t(j)] * s0;
    }
  std::array<std::array<Expr, 3>, 3> B;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      B[std::size_t(i)][std::size_t(j)] =
          A[std::size_t(i)][std::size_t(j)] +
          p[std::size_t(i)] * A[0][std::size_t(j)];

  ProjectiveLift L;
  L.chart = ch;
  L.D = std::make_shared<PlainDerivation>(ch);

  CoframeField cf;
  cf.omega[0].comp = {one, -p[1], -p[2], zero, zero};
  cf.omega[1].comp = {zero, one, zero, zero, zero};
  cf.omega[2].comp = {zero, zero, one, zero, zero};
  cf.omega[3].comp = {zero, -B[1][1], -B[2][1], one, zero};
  cf.omega[4].comp = {zero, -B[1][2], -B[2][2], zero, one};

  FrameField fr;
  fr.e[0] = {one, zero, zero, zero, zero};
  fr.e[1] = {p[1], one, zero, B[1][1], B[1][2]};
  fr.e[2] = {p[2], zero, one, B[2][1], B[2][2]};
  fr.e[3] = {zero, zero, zero, one, zero};
  fr.e[4] = {zero, zero, zero, zero, one};

  L.coframe = cf;
  L.frame = fr;
  StructureFields sc(fr, cf, *L.D);
  L.mn = mn_from_structure(sc);
  L.W = curvature_quartic(fr, L.mn, *L.D);
  L.W_reduced = reduced_curvature_quartic(sc, L.W);
  return L;
}

namespace {

bool all_constant(const std::array<std::array<Expr, 4>, 4>& m) {
  for (const auto& row : m)
    for (const Expr& e : row)
      if (!e.is_constant()) return false;
  return true;
}

Eigen::Matrix4d eval4(const std::array<std::array<Expr, 4>, 4>& m,
                      const Environment& env) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      out(i, j) = m[std::size_t(i)][std::size_t(j)].eval(env);
  return out;
}

}  // namespace

Contactified contactify(const ParaKahlerScene& pk, const Environment& at,
                        double tol) {
  const Chart& ch = pk.chart;
  if (ch.dim() != 5)
    throw DomainError("contactify: chart must have 4 base coordinates + 1");
  int tid = ch.coord_ids[4];
  auto check_base_only = [&](const Expr& e) {
    for (int v : e.variables())
      if (v == tid)
        throw DomainError(
            "contactify: scene data may not use the extension coordinate");
  };
  for (const auto& row : pk.g)
    for (const Expr& e : row) check_base_only(e);
  for (const auto& row : pk.Om)
    for (const Expr& e : row) check_base_only(e);
  for (const Expr& e : pk.omega0) check_base_only(e);

  PlainDerivation D(ch);

  // d(omega0)_ij must reproduce Om at the sample point.
  Eigen::Matrix4d Omv = eval4(pk.Om, at);
  double scale = std::max(Omv.cwiseAbs().maxCoeff(), 1.0);
  OneForm a = OneForm::zero(ch.table);
  for (int i = 0; i < 4; ++i) a.comp[std::size_t(i)] = pk.omega0[std::size_t(i)];
  auto da = d_oneform(a, D);
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      worst = std::max(
          worst,
          std::abs(da[std::size_t(i)][std::size_t(j)].eval(at) - Omv(i, j)));
  if (worst > tol * scale)
    throw PrimitiveMismatch("contactify: d(omega0) != Om, defect " +
                            std::to_string(worst / scale));

  Contactified out;
  Eigen::Matrix4d Gv = eval4(pk.g, at);
  out.compat = compatibility(Gv, Omv);
  out.delta = out.compat.compatible ? delta_invariant(Gv, Omv)
                                    : delta_from_pfaffian(Gv, Omv);

  Expr zero = ch.c(0.0), one = ch.c(1.0);
  CoframeField cf;
  cf.omega[0].comp = {pk.omega0[0], pk.omega0[1], pk.omega0[2], pk.omega0[3],
                      one};
  FrameField fr;
  if (all_constant(pk.g) && all_constant(pk.Om)) {
    // Constant scene: one adapted base frame works everywhere, and the
    // lifted legs close onto the contact direction alone, so the spectral
    // correction vanishes and W is identically zero.
    AdaptedPencil ap = adapted_coframe(Gv, Omv);
    Eigen::Matrix4d Fi = ap.frame.inverse();
    for (int l = 1; l <= 4; ++l) {
      for (int i = 0; i < 4; ++i)
        cf.omega[std::size_t(l)].comp[std::size_t(i)] = ch.c(Fi(l - 1, i));
      cf.omega[std::size_t(l)].comp[4] = zero;
      Expr vert = zero;
      for (int i = 0; i < 4; ++i) {
        fr.e[std::size_t(l)][std::size_t(i)] = ch.c(ap.frame(i, l - 1));
        vert = vert - pk.omega0[std::size_t(i)] * ap.frame(i, l - 1);
      }
      fr.e[std::size_t(l)][4] = vert;
    }
  } else {
    // Variable scene: no global adapted frame, lift the coordinate frame
    // instead and report the pointwise classification only.
    for (int l = 1; l <= 4; ++l) {
      for (int i = 0; i < 5; ++i)
        cf.omega[std::size_t(l)].comp[std::size_t(i)] =
            (i == l - 1) ? one : zero;
      for (int i = 0; i < 4; ++i)
        fr.e[std::size_t(l)][std::size_t(i)] = (i == l - 1) ? one : zero;
      fr.e[std::size_t(l)][4] = -pk.omega0[std::size_t(l - 1)];
    }
  }
  fr.e[0] = {zero, zero, zero, zero, one};
  out.coframe = cf;
  out.frame = fr;

  if (all_constant(pk.g) && all_constant(pk.Om)) {
    StructureFields sc(fr, cf, D);
    MNCubics mn = mn_from_structure(sc);
    out.W = curvature_quartic(fr, mn, D);
    out.W_reduced = reduced_curvature_quartic(sc, *out.W);
  }
  return out;
}

}  // namespace subcurv
