#pragma once

// Spectral curvature machinery: the cubics (m, n) read off an adapted frame,
// the degree-4 polynomial W they generate, lifts of point congruences to the
// spectral direction, and Frobenius span defects of lifted pairs.

#include "subcurv/chart.hpp"
#include "subcurv/fields.hpp"
#include "subcurv/lambda_poly.hpp"

namespace subcurv {

struct MNCubics {
  LambdaPoly m, n;
};

// Coefficients assembled from the structure constants of an adapted frame
// (legs 1..4 horizontal, leg 0 transversal):
//   m = c14^3 + (c24^3 + c14^4 − c13^3) λ + (c24^4 − c23^3 − c13^4) λ² − c23^4 λ³
//   n = −c14^2 + (c13^2 + c14^1 − c24^2) λ + (c24^1 + c23^2 − c13^1) λ² − c23^1 λ³
MNCubics mn_from_structure(const StructureFields& sc);

// W(λ) = e₁(n) + λ e₂(n) − λ e₃(m) + e₄(m) + (m n_λ − n m_λ), degree ≤ 4.
LambdaPoly curvature_quartic(const FrameField& fr, const MNCubics& mn,
                             const Derivation& D);

// In-plane bracket component of [e₁ + λe₂, λe₃ − e₄] along leg k:
//   φᵏ(λ) = −c₁₄ᵏ + (c₁₃ᵏ − c₂₄ᵏ) λ + c₂₃ᵏ λ².
LambdaPoly inplane_quadratic(const StructureFields& sc, int k);

// W + φ¹φ³ + φ²φ⁴: the ∂λ-component of the lifted-pair bracket after the
// components along the lifted plane itself are subtracted. The raw quartic
// above depends on which generators span the spectral planes; this one is an
// invariant of the plane family, so only its root set survives generator
// changes and reparametrizations. Degree stays ≤ 4: m = −φ³ − λφ⁴ and
// n = φ² − λφ¹ make the λφ¹φ⁴ cross-terms cancel exactly.
LambdaPoly reduced_curvature_quartic(const StructureFields& sc,
                                     const LambdaPoly& raw);

// Point congruence over a chart ordered (x, y, p, q, r):
//   X = ∂x + p ∂r + a ∂p + b ∂q,  Y = ∂y + q ∂r + b ∂p + c ∂q
// with a, b, c affine in the spectral parameter.
struct Congruence {
  LambdaPoly a, b, c;
};

struct NormalLift {
  VectorFieldL X, Y;   // spectral components carry the unique lift (m, n)
  LambdaPoly m, n;
  Expr nondegeneracy;  // a_λ c_λ − b_λ²; must not vanish at sample points
};

// The unique (m, n) solving
//   a_λ n − b_λ m = X(b) − Y(a),   b_λ n − c_λ m = X(c) − Y(b).
// Throws DegenerateCongruence when a_λ c_λ − b_λ² is structurally zero and
// DomainError when a, b, c are not affine in λ.
NormalLift normal_lift(const Chart& ch, const Derivation& D, const Congruence& cg);

// Bracket of a spectral pair, precomputed symbolically; defect() measures how
// far it falls outside span{X, Y} inside the 6-dim (coords, λ) tangent.
class LaxPair {
public:
  LaxPair(VectorFieldL X, VectorFieldL Y, const Derivation& D);

  // Relative span defect at a point and spectral value; 0 means involutive.
  // Throws DependentGenerators when X, Y are linearly dependent there.
  double defect(const Environment& env, double lambda) const;

  const VectorFieldL& bracket() const { return C_; }
  const VectorFieldL& X() const { return X_; }
  const VectorFieldL& Y() const { return Y_; }

private:
  VectorFieldL X_, Y_, C_;
};

}  // namespace subcurv
