#pragma once

// The flagship second-order system on the chart (x, y, p, q, r) with four
// unknown scalar fields u, v, w, z carried as formal jets: its adapted
// coframe and exact dual frame, the induced metric display, the spectral
// point congruence with its lift, and the residual quartic W whose first
// four coefficients cut out the system. Everything symbolic is built once
// per process and compiled to evaluation tapes for the per-point loops.

#include <Eigen/Dense>
#include <array>

#include "subcurv/curvature.hpp"
#include "subcurv/fields.hpp"

namespace subcurv {

struct MasterStructure {
  std::shared_ptr<const JetChart> jets;  // coords x,y,p,q,r; deps u,v,w,z; order 2
  std::shared_ptr<const Derivation> D;   // total derivation on `jets`
  CoframeField coframe;  // ω⁰ = dr − p dx − q dy and the four adapted legs
  FrameField frame;      // exact symbolic duals (denominator 4v²)
  Expr coframe_det;      // determinant of the coefficient matrix, equals 4v²
  std::array<std::array<Expr, 5>, 5> metric;  // coordinate matrix of g
  Congruence congruence;  // a = λ, b = λu − w, c = λ(u² − v²) − z
  NormalLift lift;        // unique spectral lift (m, n) of the congruence
  LambdaPoly W;           // residual quartic of the lift (degree ≤ 3 here)
  MNCubics frame_mn;      // (m, n) read off the frame structure constants
  LambdaPoly frame_W;     // raw quartic of the frame route
  // Plane-invariant variant; satisfies lift W(λ) = −2 · reduced(−vλ), so its
  // roots are the lift roots scaled by −v.
  LambdaPoly frame_W_reduced;
};

const MasterStructure& master_structure();

// Everything the pointwise checks consume, evaluated with one tape pass.
struct MasterPoint {
  std::array<double, 5> lift_w{};   // lift-route quartic coefficients
  std::array<double, 5> frame_w{};  // frame-route quartic coefficients
  std::array<double, 5> frame_w_reduced{};  // plane-invariant frame quartic
  double v = 0.0;
  double p = 0.0, q = 0.0;
  Eigen::Matrix4d G;  // metric on (∂x + p∂r, ∂y + q∂r, ∂p, ∂q)
  // dB[k][dep][t]: derivative of lift W_k by the t-th order-2 jet of
  // dependency dep, multi-indices in lexicographic order.
  std::array<std::array<std::array<double, 15>, 4>, 4> dB{};
};

class MasterEval {
public:
  static const MasterEval& instance();

  // Throws VanishingV when |v| <= 1e-8 at the point.
  MasterPoint at(const Environment& env) const;

  // Q(θ) = tᵀ G⁻¹ t with t_a = θ(e_a) on the horizontal frame.
  static double q_form(const MasterPoint& mp, const Eigen::Matrix<double, 5, 1>& theta);

  // Entry (k, dep) is Σ_{i≤j} ∂W_k/∂f_ij θ_i θ_j.
  static Eigen::Matrix4d b_matrix(const MasterPoint& mp,
                                  const Eigen::Matrix<double, 5, 1>& theta);

  // det B(θ) / Q(θ)⁴; throws QNearZero when the denominator is unusable.
  static double b_ratio(const MasterPoint& mp, const Eigen::Matrix<double, 5, 1>& theta);

private:
  MasterEval();
  std::vector<Expr> roots_;
  ExprProgram prog_;
  int off_lift_ = 0, off_frame_ = 0, off_red_ = 0, off_db_ = 0, off_g_ = 0,
      off_misc_ = 0;
  int v_id_ = -1;  // checked before the tape runs; its entries divide by v
};

}  // namespace subcurv
