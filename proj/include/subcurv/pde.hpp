#pragma once

// Built-in second-order relations on five coordinates. Each problem bundles
// the relation itself, the one-form cutting out its characteristic
// distribution, a spectral pair that becomes involutive on solutions, and
// the data needed to project random jet values onto the relation.

#include <string>

#include "subcurv/chart.hpp"
#include "subcurv/fields.hpp"
#include "subcurv/symbol.hpp"

namespace subcurv {

struct PDEProblem {
  std::string name;
  JetChartPtr jets;  // order-3 jets of u over (x1..x5), plus any parameters
  Expr F;
  OneForm kernel_form;  // spans the annihilator of the symbol's image
  VectorFieldL lax_X, lax_Y;
  int principal = -1;    // order-2 jet that jet_project eliminates
  Expr principal_coeff;  // dF/d(principal); minded against vanishing
};

// F = u15 + c u25 + u13 u24 − u14 u23, parameter "c" read from the
// environment.
PDEProblem heavenly_problem();

// F = u5 u13 − u3 u15 + u5 u24 − u4 u25; sample points need |u5| away
// from zero.
PDEProblem fk_problem();

// Moves the six jets {principal, its five shifts} so that F = 0 and
// D_i F = 0 all hold at env to within tol. Each equation is linear in its
// own unknown but feeds the others, so Gauss–Seidel sweeps of per-equation
// Newton steps run until the whole system settles. Throws NotSolvable when
// |dF/d(principal)| <= coeff_tol at env and NewtonDiverged when the
// residuals still exceed tol after max_sweeps.
void jet_project(const PDEProblem& pb, Environment& env, double tol = 1e-10,
                 int max_sweeps = 20, double coeff_tol = 1e-6);

// Residuals of the relation and its five total derivatives at env.
std::array<double, 6> relation_residuals(const PDEProblem& pb,
                                         const Environment& env);

struct Classification {
  Mat5 S;                              // symbol value
  Eigen::Matrix<double, 1, 5> omega0;  // kernel covector of S
  Eigen::Matrix<double, 5, 4> frame;   // basis of the image of S
  Eigen::Matrix4d G, O;
  double volume = 0.0;  // kernel_form ∧ d(kernel_form) ∧ d(kernel_form)
  double delta = 0.0;
  int type = 0;  // sign of delta: +1 real splitting, −1 complex
  Compat compat;
};

// Pointwise symbol pipeline: symbol matrix, rank-4 split, induced metric,
// 2-form of the kernel form on the image, compatibility and delta.
Classification classify(const PDEProblem& pb, const Environment& env);

}  // namespace subcurv
