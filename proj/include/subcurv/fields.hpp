#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>

#include "subcurv/chart.hpp"
#include "subcurv/lambda_poly.hpp"

namespace subcurv {

using Mat5 = Eigen::Matrix<double, 5, 5>;
using Vec5 = Eigen::Matrix<double, 5, 1>;

// Vector field on a 5-dim chart extended by the spectral line: five
// coordinate components plus an optional ∂_λ component, all polynomial in λ.
struct VectorFieldL {
  std::array<LambdaPoly, 5> comp;
  LambdaPoly spectral;  // ∂_λ coefficient; the zero polynomial if absent

  static VectorFieldL zero(const TablePtr& table);
  bool lambda_free() const;
  // Coordinate components at (env, λ); does not include the spectral slot.
  Vec5 eval_at(const Environment& env, double lambda) const;
  double eval_spectral(const Environment& env, double lambda) const;
};

// X(f) = Σ_i X^i D_i(f), coefficient-wise in λ (no spectral contribution).
LambdaPoly apply(const VectorFieldL& X, const LambdaPoly& f, const Derivation& D);

// Lie bracket on the λ-extended space:
//   [X,Y]^k = X(Y^k) − Y(X^k) + m ∂_λ(Y^k) − n ∂_λ(X^k)
//   [X,Y]^λ = X(n) − Y(m) + m n_λ − n m_λ
// with m, n the spectral components of X, Y.
VectorFieldL commutator(const VectorFieldL& X, const VectorFieldL& Y,
                        const Derivation& D);

// One-form with λ-free Expr components.
struct OneForm {
  std::array<Expr, 5> comp;
  static OneForm zero(const TablePtr& table);
};

// λ-free vector field as plain Expr components (row i of a frame).
using FrameRow = std::array<Expr, 5>;

// Five one-forms; index 0 is the transversal (contact) form, 1..4 span the
// annihilator complement used for the metric.
struct CoframeField {
  std::array<OneForm, 5> omega;
};

// Five vector fields dual to a coframe; e[i] = ∂_{ω^i}.
struct FrameField {
  std::array<FrameRow, 5> e;
};

struct DualFrameValue {
  Mat5 frame;  // row i = components of ∂_{ω^i}
  double det = 0.0;
  double cond = 0.0;
  double duality_residual = 0.0;
};

// Pointwise dual frame by numeric inversion. Throws SingularCoframe when
// |det| <= 1e-12 · scale.
DualFrameValue dual_frame(const CoframeField& cf, const Environment& env);

// Exact symbolic dual frame via adjugate / determinant.
FrameField invert_coframe(const CoframeField& cf);

// Determinant of the 5×5 coefficient matrix (row i = components of ω^i).
Expr coframe_determinant(const CoframeField& cf);

// Structure constants as scalar fields: [e_i, e_j] = Σ_k c_ij^k e_k with
// i < j stored, k over all five frame legs.
class StructureFields {
public:
  StructureFields(const FrameField& fr, const CoframeField& cf,
                  const Derivation& D);
  // Antisymmetric in (i,j); c(i,i,k) is the zero Expr.
  const Expr& c(int i, int j, int k) const;
  bool negated(int i, int j) const { return i > j; }
  const TablePtr& table() const { return table_; }

private:
  std::array<std::array<std::array<Expr, 5>, 5>, 5> c_;  // [i][j][k], i<j
  Expr zero_;
  TablePtr table_;
};

// Values at a point, indices 0..4, antisymmetric by storage.
struct StructureConstants {
  double c[5][5][5] = {};
  double residual = 0.0;  // max re-expansion defect ‖[e_i,e_j] − c_ij^k e_k‖
};

// Evaluates structure constants and re-verifies them by re-expanding the
// numeric brackets in the frame (residual must be <= 1e-9 · scale).
StructureConstants structure_constants(const FrameField& fr,
                                       const CoframeField& cf,
                                       const Derivation& D,
                                       const Environment& env);

// Determinant of the pairing matrix ⟨forms_i, fields_j⟩ at (env, λ).
double wedge_eval(const std::vector<OneForm>& forms,
                  const std::vector<VectorFieldL>& fields,
                  const Environment& env, double lambda = 0.0);

// Exterior derivative of a one-form: B_ij = D_i a_j − D_j a_i.
std::array<std::array<Expr, 5>, 5> d_oneform(const OneForm& a,
                                             const Derivation& D);

// Value of a ∧ da ∧ da on the coordinate 5-frame at env. The wedge basis is
// ordered by coordinate index (0,1,2,3,4); callers converting with respect to
// conventions that order a 4-frame (1,2,3,4) must handle the sign themselves.
double contact_volume(const OneForm& a, const Derivation& D,
                      const Environment& env);

// An adapted frame/coframe pair in closed form together with the derivation
// that differentiates its entries; the unit the curvature pipeline consumes.
struct FramePack {
  CoframeField coframe;
  FrameField frame;
  std::shared_ptr<const Derivation> deriv;
};

}  // namespace subcurv
