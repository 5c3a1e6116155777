#include "subcurv/pde.hpp"

#include <cmath>

#include "subcurv/error.hpp"

namespace subcurv {

PDEProblem heavenly_problem() {
  PDEProblem pb;
  pb.name = "heavenly";
  pb.jets = JetChart::create({"x1", "x2", "x3", "x4", "x5"}, {"u"}, 3, {"c"});
  const JetChart& jc = *pb.jets;
  const TablePtr& T = jc.table();
  Expr c = Expr::variable("c", T);
  Expr u13 = jc.jet(0, {0, 2}), u14 = jc.jet(0, {0, 3}), u15 = jc.jet(0, {0, 4});
  Expr u23 = jc.jet(0, {1, 2}), u24 = jc.jet(0, {1, 3}), u25 = jc.jet(0, {1, 4});
  pb.F = u15 + c * u25 + u13 * u24 - u14 * u23;
  pb.kernel_form = OneForm::zero(T);
  pb.kernel_form.comp[2] = u13 + c * u23;
  pb.kernel_form.comp[3] = u14 + c * u24;
  pb.kernel_form.comp[4] = u15 + c * u25;
  Expr zero = Expr::constant(0.0, T), one = Expr::constant(1.0, T);
  pb.lax_X = VectorFieldL::zero(T);
  pb.lax_X.comp[1] = LambdaPoly::from_coeffs({zero, one});
  pb.lax_X.comp[2] = LambdaPoly::of(u24);
  pb.lax_X.comp[3] = LambdaPoly::of(-u23);
  pb.lax_X.comp[4] = LambdaPoly::of(one);
  pb.lax_Y = VectorFieldL::zero(T);
  pb.lax_Y.comp[0] = LambdaPoly::from_coeffs({zero, -one});
  pb.lax_Y.comp[2] = LambdaPoly::of(-u14);
  pb.lax_Y.comp[3] = LambdaPoly::of(u13);
  pb.lax_Y.comp[4] = LambdaPoly::of(c);
  pb.principal = jc.jet_id(0, {0, 4});
  pb.principal_coeff = pb.F.diff(pb.principal);
  return pb;
}

PDEProblem fk_problem() {
  PDEProblem pb;
  pb.name = "fk";
  pb.jets = JetChart::create({"x1", "x2", "x3", "x4", "x5"}, {"u"}, 3);
  const JetChart& jc = *pb.jets;
  const TablePtr& T = jc.table();
  Expr u3 = jc.jet(0, {2}), u4 = jc.jet(0, {3}), u5 = jc.jet(0, {4});
  Expr u13 = jc.jet(0, {0, 2}), u15 = jc.jet(0, {0, 4});
  Expr u24 = jc.jet(0, {1, 3}), u25 = jc.jet(0, {1, 4});
  pb.F = u5 * u13 - u3 * u15 + u5 * u24 - u4 * u25;
  pb.kernel_form = OneForm::zero(T);
  pb.kernel_form.comp[2] = u3;
  pb.kernel_form.comp[3] = u4;
  pb.kernel_form.comp[4] = u5;
  Expr zero = Expr::constant(0.0, T), one = Expr::constant(1.0, T);
  pb.lax_X = VectorFieldL::zero(T);
  pb.lax_X.comp[1] = LambdaPoly::from_coeffs({zero, -one});
  pb.lax_X.comp[2] = LambdaPoly::of(one);
  pb.lax_X.comp[4] = LambdaPoly::of(-u3 / u5);
  pb.lax_Y = VectorFieldL::zero(T);
  pb.lax_Y.comp[0] = LambdaPoly::from_coeffs({zero, one});
  pb.lax_Y.comp[3] = LambdaPoly::of(one);
  pb.lax_Y.comp[4] = LambdaPoly::of(-u4 / u5);
  pb.principal = jc.jet_id(0, {0, 2});
  pb.principal_coeff = pb.F.diff(pb.principal);
  return pb;
}

std::array<double, 6> relation_residuals(const PDEProblem& pb,
                                         const Environment& env) {
  std::array<double, 6> out{};
  out[0] = pb.F.eval(env);
  for (int i = 0; i < 5; ++i)
    out[std::size_t(i + 1)] = pb.jets->total_derivative(pb.F, i).eval(env);
  return out;
}

void jet_project(const PDEProblem& pb, Environment& env, double tol,
                 int max_sweeps, double coeff_tol) {
  const JetChart& jc = *pb.jets;
  double lead = pb.principal_coeff.eval(env);
  if (std::abs(lead) <= coeff_tol)
    throw NotSolvable(pb.name + ": leading coefficient " +
                      std::to_string(lead) + " too close to zero");

  std::array<Expr, 6> eqs;
  std::array<int, 6> unk{};
  eqs[0] = pb.F;
  unk[0] = pb.principal;
  for (int i = 0; i < 5; ++i) {
    eqs[std::size_t(i + 1)] = jc.total_derivative(pb.F, i);
    unk[std::size_t(i + 1)] = jc.shift(pb.principal, i);
  }
  std::array<Expr, 6> jac;
  for (int e = 0; e < 6; ++e) jac[std::size_t(e)] = eqs[std::size_t(e)].diff(unk[std::size_t(e)]);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int e = 0; e < 6; ++e) {
      for (int it = 0; it < 8; ++it) {
        double r = eqs[std::size_t(e)].eval(env);
        if (std::abs(r) <= 0.05 * tol) break;
        double d = jac[std::size_t(e)].eval(env);
        if (std::abs(d) <= coeff_tol)
          throw NotSolvable(pb.name + ": derivative equation " +
                            std::to_string(e) + " lost its leading jet");
        env.set(unk[std::size_t(e)], env.get(unk[std::size_t(e)]) - r / d);
      }
    }
    // Solving a later equation can disturb an earlier one, so convergence is
    // judged on a fresh pass over the whole system.
    double worst = 0.0;
    for (int e = 0; e < 6; ++e)
      worst = std::max(worst, std::abs(eqs[std::size_t(e)].eval(env)));
    if (worst <= 0.5 * tol) break;
  }

  double worst = 0.0;
  for (double r : relation_residuals(pb, env)) worst = std::max(worst, std::abs(r));
  if (worst > tol)
    throw NewtonDiverged(pb.name + ": residual " + std::to_string(worst) +
                         " after " + std::to_string(max_sweeps) + " sweeps");
}

Classification classify(const PDEProblem& pb, const Environment& env) {
  Classification cl;
  SymbolMatrix S = symbol_matrix(pb.F, *pb.jets, 0);
  cl.S = eval_symbol(S, env);
  CharStructure cs = characteristic_structure(cl.S);
  cl.omega0 = cs.omega0;
  cl.frame = cs.frame;
  cl.G = induced_metric(cl.S, cs.frame);
  TotalDerivation D(pb.jets);
  cl.O = omega_form(pb.kernel_form, D, env, cs.frame);
  cl.volume = contact_volume(pb.kernel_form, D, env);
  cl.compat = compatibility(cl.G, cl.O);
  cl.delta = cl.compat.compatible ? delta_invariant(cl.G, cl.O)
                                  : delta_from_pfaffian(cl.G, cl.O);
  cl.type = cl.delta > 0 ? 1 : -1;
  return cl;
}

}  // namespace subcurv
