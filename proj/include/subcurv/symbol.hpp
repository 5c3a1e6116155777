#pragma once

// Principal symbol of a second-order scalar relation on a 5-coordinate jet
// chart, the rank-4 distribution it carves out, and the pointwise
// (metric, 2-form) pencil living on that distribution.
//
// Conventions, used consistently by every routine here:
//   * the symbol is the quadratic form sigma(θ) = θᵀ S θ on covectors,
//     S_ii = ∂F/∂u_ii and S_ij = (1/2) ∂F/∂u_ij off the diagonal;
//   * the induced metric on a frame (e_a) of the image of Sharp = S is
//     G_ab = e_aᵀ S⁺ e_b (pseudoinverse), so G inverts sigma on the image;
//   * delta is pinned by (1/2) Ω∧Ω = −delta · vol_g, which in a frame reads
//     delta = −Pf(O) / sqrt(det G) with the frame's own orientation.
// The para/complex normal forms both use G = P (ones pairing 1↔3, 2↔4):
//   split form:    O(f1,f3) = O(f2,f4) = s   (delta = s² > 0)
//   complex form:  O(f1,f2) = O(f3,f4) = s   (delta = −s² < 0)

#include <Eigen/Dense>
#include <array>

#include "subcurv/chart.hpp"
#include "subcurv/expr.hpp"
#include "subcurv/fields.hpp"

namespace subcurv {

using SymbolMatrix = std::array<std::array<Expr, 5>, 5>;

// Symbolic symmetric matrix of the principal symbol taken with respect to
// the order-2 jets of dependency `dep`.
SymbolMatrix symbol_matrix(const Expr& F, const JetChart& jc, int dep = 0);

Mat5 eval_symbol(const SymbolMatrix& S, const Environment& env);

struct CharStructure {
  Mat5 S;                             // symbol value at the point
  Eigen::Matrix<double, 1, 5> omega0; // kernel covector, largest entry +1
  Eigen::Matrix<double, 5, 4> frame;  // orthonormal basis of the image
};

// Rank-4 decomposition of a degenerate symbol. Throws RankDeficient if the
// rank is below 4 and RankFull if the symbol is nondegenerate.
CharStructure characteristic_structure(const Mat5& S);

// G_ab = e_aᵀ S⁺ e_b on a frame of the image distribution.
Eigen::Matrix4d induced_metric(const Mat5& S, const Eigen::Matrix<double, 5, 4>& frame);

// O_ab = dω(e_a, e_b) for a symbolic one-form, evaluated pointwise.
Eigen::Matrix4d omega_form(const OneForm& omega, const Derivation& D,
                           const Environment& env,
                           const Eigen::Matrix<double, 5, 4>& frame);

struct Compat {
  double c = 0.0;       // J² = c·1 when compatible, J = G⁻¹O
  double defect = 0.0;  // max |J² − c·1| relative to |c|
  bool compatible = false;
};
Compat compatibility(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O);

// −Pf(O)/sqrt(det G) in the frame as given (sign follows the frame's
// orientation). Throws SignatureMismatch unless G has signature (2,2) and
// DegenerateOmega when O is singular.
double delta_from_pfaffian(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O);

// Orientation-free route: magnitude |Pf(O)|/sqrt(det G), sign taken from the
// scalar c of J² = c·1. Requires a compatible pencil (NotSolvable otherwise).
double delta_invariant(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O);

struct AdaptedPencil {
  Eigen::Matrix4d frame;  // columns f1..f4, coefficients in the input basis
  double delta = 0.0;
  double s = 0.0;  // sqrt|delta|, the 2-form scale in the normal form
};

// Frame adapted to a compatible pencil: FᵀGF = P exactly and FᵀOF equals
// s times the split or complex normal form depending on sign(delta).
AdaptedPencil adapted_coframe(const Eigen::Matrix4d& G, const Eigen::Matrix4d& O);

}  // namespace subcurv
