#include "subcurv/roots.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace subcurv {

double chordal(const ProjRoot& a, const ProjRoot& b) {
  if (a.infinite && b.infinite) return 0.0;
  if (a.infinite) return 1.0 / std::sqrt(1.0 + std::norm(b.z));
  if (b.infinite) return 1.0 / std::sqrt(1.0 + std::norm(a.z));
  return std::abs(a.z - b.z) /
         (std::sqrt(1.0 + std::norm(a.z)) * std::sqrt(1.0 + std::norm(b.z)));
}

std::vector<ProjRoot> poly_roots(const std::vector<double>& c, int nominal_degree) {
  if (int(c.size()) != nominal_degree + 1)
    throw DimensionMismatch("coefficient count does not match nominal degree");
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) throw NotSolvable("zero polynomial has no root multiset");
  double cut = 1e-12 * cmax;

  int deg = nominal_degree;
  while (deg > 0 && std::abs(c[std::size_t(deg)]) <= cut) --deg;

  std::vector<ProjRoot> out;
  for (int k = deg; k < nominal_degree; ++k) out.push_back(ProjRoot::at_infinity());
  if (deg == 0) return out;

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i)
    comp(i, deg - 1) = -c[std::size_t(i)] / c[std::size_t(deg)];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  for (int i = 0; i < deg; ++i) out.push_back(ProjRoot::finite(es.eigenvalues()(i)));
  return out;
}

double match_roots(const std::vector<ProjRoot>& a, const std::vector<ProjRoot>& b) {
  if (a.size() != b.size())
    throw DimensionMismatch("root multisets have different sizes");
  const int n = int(a.size());
  if (n == 0) return 0.0;
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      worst = std::max(worst, chordal(a[std::size_t(i)], b[std::size_t(perm[std::size_t(i)])]));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace subcurv
