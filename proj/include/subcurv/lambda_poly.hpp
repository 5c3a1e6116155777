#pragma once

#include <array>
#include <functional>

#include "subcurv/chart.hpp"
#include "subcurv/expr.hpp"

namespace subcurv {

// Polynomial of degree <= 4 in the spectral parameter, with Expr
// coefficients. The degree bound is enforced on construction and under
// arithmetic: products that would exceed degree 4 raise DegreeOverflow, never
// truncate. Degree is structural (highest coefficient that is not the
// literal constant 0).
class LambdaPoly {
public:
  static constexpr int kMaxDeg = 4;

  static LambdaPoly zero(TablePtr table);
  static LambdaPoly of(const Expr& e);  // degree 0
  static LambdaPoly from_coeffs(std::vector<Expr> coeffs);

  const Expr& coeff(int k) const { return c_[std::size_t(k)]; }
  int degree() const { return deg_; }
  bool is_zero() const { return deg_ == 0 && c_[0].is_zero(); }
  const TablePtr& table() const { return table_; }

  LambdaPoly operator+(const LambdaPoly&) const;
  LambdaPoly operator-(const LambdaPoly&) const;
  LambdaPoly operator*(const LambdaPoly&) const;
  LambdaPoly operator*(const Expr& s) const;
  LambdaPoly operator-() const;

  // d/dλ (degree drops by one).
  LambdaPoly dlambda() const;
  // Coefficient-wise scalar-field derivative.
  LambdaPoly map_coeffs(const std::function<Expr(const Expr&)>& f) const;

  double eval(const Environment& env, double lambda) const;
  std::array<double, 5> eval_coeffs(const Environment& env) const;

  // Empty polynomial with no table; only valid as an assignment target.
  LambdaPoly() = default;

private:
  void recompute_degree();
  std::array<Expr, 5> c_;
  int deg_ = 0;
  TablePtr table_;
};

// m·(dn/dλ) − n·(dm/dλ). Coefficient k is Σ_{i+j=k+1} (j−i)·m_i·n_j, so the
// formally degree-5+ terms of the raw products cancel pairwise and are never
// materialized; if a structurally nonzero coefficient survives above degree
// 4 (possible when both inputs have degree 4), DegreeOverflow is raised.
LambdaPoly wronskian(const LambdaPoly& m, const LambdaPoly& n);

}  // namespace subcurv
