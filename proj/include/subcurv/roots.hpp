#pragma once

// Roots of low-degree real polynomials on the projective line. A degree drop
// in the leading coefficients is reported as roots at infinity rather than
// silently shrinking the root multiset, so pipelines that compare quartics
// of different apparent degree still line up.

#include <complex>
#include <vector>

#include "subcurv/error.hpp"

namespace subcurv {

struct ProjRoot {
  std::complex<double> z{0.0, 0.0};
  bool infinite = false;

  static ProjRoot finite(std::complex<double> v) { return {v, false}; }
  static ProjRoot at_infinity() { return {{0.0, 0.0}, true}; }
};

// Chordal distance on the Riemann sphere; d(inf, inf) = 0 and
// d(a, inf) = 1/sqrt(1+|a|^2).
double chordal(const ProjRoot& a, const ProjRoot& b);

// Roots of c[0] + c[1] x + ... + c[n] x^n where n = nominal_degree and
// c.size() == n + 1. Leading coefficients with |c[k]| <= 1e-12 * max|c| are
// dropped; each dropped degree contributes one root at infinity. The finite
// part is solved with a companion-matrix eigensolve. Throws NotSolvable if
// every coefficient is negligible.
std::vector<ProjRoot> poly_roots(const std::vector<double>& c, int nominal_degree);

// Minimal over pairings of the maximum chordal distance between matched
// roots; brute force over permutations (intended for multisets of size <= 4).
double match_roots(const std::vector<ProjRoot>& a, const std::vector<ProjRoot>& b);

}  // namespace subcurv
