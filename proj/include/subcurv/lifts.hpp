#pragma once

// Constructions that produce integrable-by-design structures: the lift of a
// three-dimensional path geometry to the projectivized cotangent bundle, and
// the contact extension of a split-signature symplectic scene by one
// coordinate.

#include <Eigen/Dense>
#include <optional>

#include "subcurv/curvature.hpp"
#include "subcurv/fields.hpp"
#include "subcurv/symbol.hpp"

namespace subcurv {

// Chart the lift lives on: (x0, x1, x2, p1, p2), x0 the contact coordinate.
Chart projective_chart();

// Symmetric connection coefficients on the first three coordinates of a
// projective chart. set() stores both index orders.
class Christoffel {
public:
  explicit Christoffel(const Chart& ch);
  void set(int k, int i, int j, const Expr& e);
  const Expr& at(int k, int i, int j) const {
    return g_[std::size_t(k)][std::size_t(i)][std::size_t(j)];
  }
  const Chart& chart() const { return chart_; }
  const TablePtr& table() const { return chart_.table; }

private:
  std::array<std::array<std::array<Expr, 3>, 3>, 3> g_;
  Chart chart_;
};

// Trace-free part of a connection, invariant under reparametrizations of its
// geodesics: P^k_ij = G^k_ij − ¼ (G^l_li δ^k_j + G^l_lj δ^k_i). Satisfies
// Σ_j P^j_ij = 0 identically.
Christoffel thomas_symbols(const Christoffel& G);

struct ProjectiveLift {
  Chart chart;  // (x0, x1, x2, p1, p2)
  std::shared_ptr<PlainDerivation> D;
  CoframeField coframe;  // ω⁰ = dx0 − p1 dx1 − p2 dx2, legs 1..4 adapted
  FrameField frame;
  MNCubics mn;
  LambdaPoly W;          // generator quartic of the adapted frame
  LambdaPoly W_reduced;  // plane-invariant variant
};

// Lifts trace-free connection coefficients to a contact 5-manifold carrying
// a null coframe whose curvature quartic vanishes identically when the
// coefficients come from a genuine path geometry. Entries of P may use only
// the first three coordinates (DomainError otherwise).
ProjectiveLift projective_lift(const Christoffel& P);

// Split-signature scene on four base coordinates; the chart's fifth
// coordinate is the contact extension direction.
struct ParaKahlerScene {
  Chart chart;  // 4 base coordinates then the extension coordinate
  std::array<std::array<Expr, 4>, 4> g;    // symmetric, signature (2,2)
  std::array<std::array<Expr, 4>, 4> Om;   // antisymmetric, nondegenerate
  std::array<Expr, 4> omega0;              // primitive: d(omega0) = Om
};

struct Contactified {
  CoframeField coframe;  // leg 0 = dt + omega0; legs 1..4 lift an adapted
                         // base coframe (constant-coefficient scenes only)
  FrameField frame;
  double delta = 0.0;
  Compat compat;
  // Curvature quartics of the lifted coframe; present only when g and Om
  // have constant coefficients (the adapted base coframe is then global).
  std::optional<LambdaPoly> W, W_reduced;
};

// Extends the scene by one coordinate with contact form dt + omega0 after
// checking d(omega0) = Om at the sample point (PrimitiveMismatch beyond
// tol, relative to the largest Om entry).
Contactified contactify(const ParaKahlerScene& pk, const Environment& at,
                        double tol = 1e-8);

}  // namespace subcurv
