#include "subcurv/fields.hpp"

#include <cmath>

namespace subcurv {

VectorFieldL VectorFieldL::zero(const TablePtr& table) {
  VectorFieldL v;
  for (auto& c : v.comp) c = LambdaPoly::zero(table);
  v.spectral = LambdaPoly::zero(table);
  return v;
}

bool VectorFieldL::lambda_free() const {
  for (const auto& c : comp)
    if (c.degree() > 0) return false;
  return spectral.is_zero();
}

Vec5 VectorFieldL::eval_at(const Environment& env, double lambda) const {
  Vec5 out;
  for (int i = 0; i < 5; ++i) out(i) = comp[std::size_t(i)].eval(env, lambda);
  return out;
}

double VectorFieldL::eval_spectral(const Environment& env, double lambda) const {
  return spectral.eval(env, lambda);
}

LambdaPoly apply(const VectorFieldL& X, const LambdaPoly& f, const Derivation& D) {
  LambdaPoly out = LambdaPoly::zero(f.table() ? f.table() : X.comp[0].table());
  for (int i = 0; i < 5; ++i) {
    if (X.comp[std::size_t(i)].is_zero()) continue;
    LambdaPoly df = f.map_coeffs([&](const Expr& e) {
      return e.is_zero() ? e : D.d(e, i);
    });
    if (df.is_zero()) continue;
    out = out + X.comp[std::size_t(i)] * df;
  }
  return out;
}

VectorFieldL commutator(const VectorFieldL& X, const VectorFieldL& Y,
                        const Derivation& D) {
  VectorFieldL out;
  const LambdaPoly& m = X.spectral;
  const LambdaPoly& n = Y.spectral;
  for (int k = 0; k < 5; ++k) {
    LambdaPoly term = apply(X, Y.comp[std::size_t(k)], D) -
                      apply(Y, X.comp[std::size_t(k)], D);
    if (!m.is_zero()) term = term + m * Y.comp[std::size_t(k)].dlambda();
    if (!n.is_zero()) term = term - n * X.comp[std::size_t(k)].dlambda();
    out.comp[std::size_t(k)] = term;
  }
  LambdaPoly spec = apply(X, n, D) - apply(Y, m, D);
  if (!m.is_zero() && !n.is_zero()) spec = spec + wronskian(m, n);
  out.spectral = spec;
  return out;
}

OneForm OneForm::zero(const TablePtr& table) {
  OneForm f;
  for (auto& c : f.comp) c = Expr::constant(0.0, table);
  return f;
}

namespace {

Mat5 coframe_matrix(const CoframeField& cf, const Environment& env) {
  Mat5 C;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      C(i, j) = cf.omega[std::size_t(i)].comp[std::size_t(j)].eval(env);
  return C;
}

}  // namespace

DualFrameValue dual_frame(const CoframeField& cf, const Environment& env) {
  Mat5 C = coframe_matrix(cf, env);
  Eigen::JacobiSVD<Mat5> svd(C);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(4);
  double det = C.determinant();
  double scale = std::max(1.0, std::pow(smax, 5));
  if (std::abs(det) <= 1e-12 * scale)
    throw SingularCoframe("coframe determinant " + std::to_string(det) +
                          " below threshold at sample point");
  DualFrameValue out;
  // Duality ⟨ω^i, e_j⟩ = δ_ij with e_j read off rows: rows of C^{-T}.
  Mat5 inv = C.inverse();
  out.frame = inv.transpose();
  out.det = det;
  out.cond = smax / smin;
  out.duality_residual = (C * inv - Mat5::Identity()).cwiseAbs().maxCoeff();
  return out;
}

namespace {

// Determinant of an n×n Expr matrix by cofactor expansion. Fine for n <= 5;
// folding keeps structural zeros from exploding the tree.
Expr expr_det(const std::vector<std::vector<Expr>>& m, const TablePtr& table) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  Expr acc = Expr::constant(0.0, table);
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    Expr term = m[0][j] * expr_det(minor, table);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

FrameField invert_coframe(const CoframeField& cf) {
  TablePtr table = cf.omega[0].comp[0].table();
  std::vector<std::vector<Expr>> C(5, std::vector<Expr>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      C[std::size_t(i)][std::size_t(j)] = cf.omega[std::size_t(i)].comp[std::size_t(j)];
  Expr det = expr_det(C, table);

  // e_j^l = (C^{-1})_{l j} = cofactor_{j l} / det, so frame row j, column l.
  FrameField fr;
  for (int j = 0; j < 5; ++j)
    for (int l = 0; l < 5; ++l) {
      std::vector<std::vector<Expr>> minor;
      for (int r = 0; r < 5; ++r) {
        if (r == j) continue;
        std::vector<Expr> row;
        for (int c = 0; c < 5; ++c)
          if (c != l) row.push_back(C[std::size_t(r)][std::size_t(c)]);
        minor.push_back(std::move(row));
      }
      Expr cof = expr_det(minor, table);
      if ((j + l) % 2 == 1) cof = -cof;
      fr.e[std::size_t(j)][std::size_t(l)] = cof / det;
    }
  return fr;
}

Expr coframe_determinant(const CoframeField& cf) {
  TablePtr table = cf.omega[0].comp[0].table();
  std::vector<std::vector<Expr>> C(5, std::vector<Expr>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      C[std::size_t(i)][std::size_t(j)] = cf.omega[std::size_t(i)].comp[std::size_t(j)];
  return expr_det(C, table);
}

StructureFields::StructureFields(const FrameField& fr, const CoframeField& cf,
                                 const Derivation& D) {
  table_ = cf.omega[0].comp[0].table();
  zero_ = Expr::constant(0.0, table_);
  // Precompute D_m e_j^l.
  std::array<std::array<std::array<Expr, 5>, 5>, 5> de;  // [j][l][m]
  for (int j = 0; j < 5; ++j)
    for (int l = 0; l < 5; ++l)
      for (int m = 0; m < 5; ++m) {
        const Expr& ejl = fr.e[std::size_t(j)][std::size_t(l)];
        de[std::size_t(j)][std::size_t(l)][std::size_t(m)] =
            ejl.is_zero() ? zero_ : D.d(ejl, m);
      }
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 5; ++k)
        c_[std::size_t(i)][std::size_t(j)][std::size_t(k)] = zero_;

  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      // bracket^l = Σ_m e_i^m D_m e_j^l − e_j^m D_m e_i^l
      std::array<Expr, 5> br;
      for (int l = 0; l < 5; ++l) {
        Expr acc = zero_;
        for (int m = 0; m < 5; ++m) {
          const Expr& eim = fr.e[std::size_t(i)][std::size_t(m)];
          const Expr& ejm = fr.e[std::size_t(j)][std::size_t(m)];
          if (!eim.is_zero())
            acc = acc + eim * de[std::size_t(j)][std::size_t(l)][std::size_t(m)];
          if (!ejm.is_zero())
            acc = acc - ejm * de[std::size_t(i)][std::size_t(l)][std::size_t(m)];
        }
        br[std::size_t(l)] = acc;
      }
      // c_ij^k = ω^k(bracket)
      for (int k = 0; k < 5; ++k) {
        Expr acc = zero_;
        for (int l = 0; l < 5; ++l) {
          const Expr& w = cf.omega[std::size_t(k)].comp[std::size_t(l)];
          if (!w.is_zero() && !br[std::size_t(l)].is_zero())
            acc = acc + w * br[std::size_t(l)];
        }
        c_[std::size_t(i)][std::size_t(j)][std::size_t(k)] = acc;
      }
    }
}

const Expr& StructureFields::c(int i, int j, int k) const {
  if (i == j) return zero_;
  if (i < j) return c_[std::size_t(i)][std::size_t(j)][std::size_t(k)];
  return c_[std::size_t(j)][std::size_t(i)][std::size_t(k)];  // caller must negate
}

StructureConstants structure_constants(const FrameField& fr,
                                       const CoframeField& cf,
                                       const Derivation& D,
                                       const Environment& env) {
  StructureFields fields(fr, cf, D);
  StructureConstants out;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      for (int k = 0; k < 5; ++k) {
        double v = fields.c(i, j, k).eval(env);
        out.c[i][j][k] = v;
        out.c[j][i][k] = -v;
      }

  // Re-expansion check: numeric brackets against Σ_k c_ij^k e_k.
  Mat5 E;
  for (int i = 0; i < 5; ++i)
    for (int l = 0; l < 5; ++l)
      E(i, l) = fr.e[std::size_t(i)][std::size_t(l)].eval(env);
  double scale = std::max(1.0, E.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      Vec5 br;
      for (int l = 0; l < 5; ++l) {
        double acc = 0.0;
        for (int m = 0; m < 5; ++m) {
          const Expr& ejl = fr.e[std::size_t(j)][std::size_t(l)];
          const Expr& eil = fr.e[std::size_t(i)][std::size_t(l)];
          if (!ejl.is_zero()) acc += E(i, m) * D.d(ejl, m).eval(env);
          if (!eil.is_zero()) acc -= E(j, m) * D.d(eil, m).eval(env);
        }
        br(l) = acc;
      }
      Vec5 recon = Vec5::Zero();
      for (int k = 0; k < 5; ++k) recon += out.c[i][j][k] * E.row(k).transpose();
      worst = std::max(worst, (br - recon).cwiseAbs().maxCoeff() / scale);
    }
  out.residual = worst;
  return out;
}

double wedge_eval(const std::vector<OneForm>& forms,
                  const std::vector<VectorFieldL>& fields,
                  const Environment& env, double lambda) {
  if (forms.size() != fields.size())
    throw DimensionMismatch("wedge_eval needs equally many forms and fields");
  const Eigen::Index n = Eigen::Index(forms.size());
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::array<double, 5> w;
    for (int c = 0; c < 5; ++c)
      w[std::size_t(c)] = forms[std::size_t(i)].comp[std::size_t(c)].eval(env);
    for (Eigen::Index j = 0; j < n; ++j) {
      Vec5 v = fields[std::size_t(j)].eval_at(env, lambda);
      double acc = 0.0;
      for (int c = 0; c < 5; ++c) acc += w[std::size_t(c)] * v(c);
      P(i, j) = acc;
    }
  }
  return P.determinant();
}

std::array<std::array<Expr, 5>, 5> d_oneform(const OneForm& a,
                                             const Derivation& D) {
  std::array<std::array<Expr, 5>, 5> B;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (i == j) {
        B[std::size_t(i)][std::size_t(j)] = Expr::constant(0.0, a.comp[0].table());
        continue;
      }
      B[std::size_t(i)][std::size_t(j)] =
          D.d(a.comp[std::size_t(j)], i) - D.d(a.comp[std::size_t(i)], j);
    }
  return B;
}

double contact_volume(const OneForm& a, const Derivation& D,
                      const Environment& env) {
  // Exterior algebra over 5 dims as coefficients on index bitmasks; the
  // 5-form coefficient on mask 0b11111 is the value on (∂_0, ..., ∂_4).
  auto B = d_oneform(a, D);
  std::array<double, 32> av{}, bv{}, acc{};
  for (int i = 0; i < 5; ++i) av[std::size_t(1 << i)] = a.comp[std::size_t(i)].eval(env);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      bv[std::size_t((1 << i) | (1 << j))] =
          B[std::size_t(i)][std::size_t(j)].eval(env);

  // e^S ∧ e^T for disjoint sorted index sets: sign is the parity of pairs
  // (s, t) with s ∈ S, t ∈ T, s > t.
  auto wedge = [](const std::array<double, 32>& x,
                  const std::array<double, 32>& y) {
    std::array<double, 32> out{};
    for (int s = 0; s < 32; ++s) {
      if (x[std::size_t(s)] == 0.0) continue;
      for (int t = 0; t < 32; ++t) {
        if (y[std::size_t(t)] == 0.0 || (s & t)) continue;
        int sign = 1;
        for (int b = 0; b < 5; ++b)
          if (t & (1 << b))
            if (__builtin_popcount(s >> (b + 1)) % 2) sign = -sign;
        out[std::size_t(s | t)] += sign * x[std::size_t(s)] * y[std::size_t(t)];
      }
    }
    return out;
  };

  acc = wedge(av, bv);
  acc = wedge(acc, bv);
  return acc[31];
}

}  // namespace subcurv
