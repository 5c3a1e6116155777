#include "subcurv/master.hpp"

#include <cmath>

namespace subcurv {

const MasterStructure& master_structure() {
  static const MasterStructure ms = [] {
    MasterStructure s;
    s.jets = JetChart::create({"x", "y", "p", "q", "r"}, {"u", "v", "w", "z"}, 2);
    s.D = std::make_shared<TotalDerivation>(s.jets);
    const Chart& ch = s.jets->base();
    Expr p = ch.coord(2), q = ch.coord(3);
    Expr u = s.jets->jet(0, {}), v = s.jets->jet(1, {});
    Expr w = s.jets->jet(2, {}), z = s.jets->jet(3, {});
    Expr zero = ch.c(0.0), one = ch.c(1.0);

    auto form = [](Expr cx, Expr cy, Expr cp, Expr cq, Expr cr) {
      OneForm f;
      f.comp = {std::move(cx), std::move(cy), std::move(cp), std::move(cq),
                std::move(cr)};
      return f;
    };
    s.coframe.omega[0] = form(-p, -q, zero, zero, one);
    s.coframe.omega[1] = form(one, u + v, zero, zero, zero);
    s.coframe.omega[2] = form(w, z - w * (u + v), -(u + v), one, zero);
    s.coframe.omega[3] = form(w, z - w * (u - v), -(u - v), one, zero);
    s.coframe.omega[4] = form(one, u - v, zero, zero, zero);
    s.frame = invert_coframe(s.coframe);
    s.coframe_det = coframe_determinant(s.coframe);

    for (auto& row : s.metric)
      for (auto& e : row) e = zero;
    auto& M = s.metric;
    M[0][0] = w;
    M[0][1] = M[1][0] = z * 0.5;
    M[1][1] = (v * v - u * u) * w + u * z;
    M[0][2] = M[2][0] = u * (-0.5);
    M[0][3] = M[3][0] = ch.c(0.5);
    M[1][2] = M[2][1] = (v * v - u * u) * 0.5;
    M[1][3] = M[3][1] = u * 0.5;

    s.congruence = Congruence{
        LambdaPoly::from_coeffs({zero, one}),
        LambdaPoly::from_coeffs({-w, u}),
        LambdaPoly::from_coeffs({-z, u * u - v * v}),
    };
    s.lift = normal_lift(ch, *s.D, s.congruence);
    s.W = commutator(s.lift.X, s.lift.Y, *s.D).spectral;

    StructureFields sf(s.frame, s.coframe, *s.D);
    s.frame_mn = mn_from_structure(sf);
    s.frame_W = curvature_quartic(s.frame, s.frame_mn, *s.D);
    s.frame_W_reduced = reduced_curvature_quartic(sf, s.frame_W);
    return s;
  }();
  return ms;
}

namespace {

// Multi-indices (i <= j) in the order jet charts enumerate order-2 jets.
std::array<std::pair<int, int>, 15> order2_pairs() {
  std::array<std::pair<int, int>, 15> out;
  int t = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) out[std::size_t(t++)] = {i, j};
  return out;
}

}  // namespace

const MasterEval& MasterEval::instance() {
  static const MasterEval me;
  return me;
}

MasterEval::MasterEval() {
  const MasterStructure& ms = master_structure();
  auto pairs = order2_pairs();

  off_lift_ = 0;
  for (int k = 0; k < 5; ++k) roots_.push_back(ms.W.coeff(k));
  off_frame_ = int(roots_.size());
  for (int k = 0; k < 5; ++k) roots_.push_back(ms.frame_W.coeff(k));
  off_red_ = int(roots_.size());
  for (int k = 0; k < 5; ++k) roots_.push_back(ms.frame_W_reduced.coeff(k));
  off_db_ = int(roots_.size());
  for (int k = 0; k < 4; ++k)
    for (int dep = 0; dep < 4; ++dep)
      for (int t = 0; t < 15; ++t) {
        int id = ms.jets->jet_id(dep, {pairs[std::size_t(t)].first,
                                       pairs[std::size_t(t)].second});
        roots_.push_back(ms.W.coeff(k).diff(id));
      }
  off_g_ = int(roots_.size());
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      roots_.push_back(ms.metric[std::size_t(a)][std::size_t(b)]);
  off_misc_ = int(roots_.size());
  roots_.push_back(ms.jets->jet(1, {}));       // v
  roots_.push_back(ms.jets->base().coord(2));  // p
  roots_.push_back(ms.jets->base().coord(3));  // q
  v_id_ = ms.jets->jet_id(1, {});
  prog_ = ExprProgram(roots_);
}

MasterPoint MasterEval::at(const Environment& env) const {
  // gate before evaluating: the frame entries divide by v
  if (std::abs(env.get(v_id_)) <= 1e-8)
    throw VanishingV("unknown v vanishes at the sample point");

  std::vector<double> out(roots_.size());
  auto slots = prog_.make_slots();
  prog_.eval(env, out, slots);

  MasterPoint mp;
  mp.v = out[std::size_t(off_misc_)];
  mp.p = out[std::size_t(off_misc_ + 1)];
  mp.q = out[std::size_t(off_misc_ + 2)];
  for (int k = 0; k < 5; ++k) {
    mp.lift_w[std::size_t(k)] = out[std::size_t(off_lift_ + k)];
    mp.frame_w[std::size_t(k)] = out[std::size_t(off_frame_ + k)];
    mp.frame_w_reduced[std::size_t(k)] = out[std::size_t(off_red_ + k)];
  }
  int t = off_db_;
  for (int k = 0; k < 4; ++k)
    for (int dep = 0; dep < 4; ++dep)
      for (int s = 0; s < 15; ++s)
        mp.dB[std::size_t(k)][std::size_t(dep)][std::size_t(s)] = out[std::size_t(t++)];
  int g = off_g_;
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b) {
      mp.G(a, b) = out[std::size_t(g)];
      mp.G(b, a) = out[std::size_t(g)];
      ++g;
    }
  return mp;
}

double MasterEval::q_form(const MasterPoint& mp, const Eigen::Matrix<double, 5, 1>& theta) {
  Eigen::Vector4d t;
  t << theta(0) + mp.p * theta(4), theta(1) + mp.q * theta(4), theta(2), theta(3);
  Eigen::Matrix4d Ginv = mp.G.inverse();
  double Q = t.dot(Ginv * t);
  double scale = 1.0 + Ginv.cwiseAbs().maxCoeff() * t.squaredNorm();
  if (std::abs(Q) <= 1e-8 * scale)
    throw QNearZero("covector sits on the null cone of the symbol");
  return Q;
}

Eigen::Matrix4d MasterEval::b_matrix(const MasterPoint& mp,
                                     const Eigen::Matrix<double, 5, 1>& theta) {
  auto pairs = order2_pairs();
  std::array<double, 15> mono;
  for (int t = 0; t < 15; ++t)
    mono[std::size_t(t)] =
        theta(pairs[std::size_t(t)].first) * theta(pairs[std::size_t(t)].second);
  Eigen::Matrix4d B;
  for (int k = 0; k < 4; ++k)
    for (int dep = 0; dep < 4; ++dep) {
      double acc = 0.0;
      for (int t = 0; t < 15; ++t)
        acc += mp.dB[std::size_t(k)][std::size_t(dep)][std::size_t(t)] * mono[std::size_t(t)];
      B(k, dep) = acc;
    }
  return B;
}

double MasterEval::b_ratio(const MasterPoint& mp, const Eigen::Matrix<double, 5, 1>& theta) {
  double Q = q_form(mp, theta);
  double detB = b_matrix(mp, theta).determinant();
  return detB / (Q * Q * Q * Q);
}

}  // namespace subcurv
