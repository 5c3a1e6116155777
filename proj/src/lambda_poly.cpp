#include "subcurv/lambda_poly.hpp"

namespace subcurv {

LambdaPoly LambdaPoly::zero(TablePtr table) {
  LambdaPoly p;
  p.table_ = table;
  for (auto& c : p.c_) c = Expr::constant(0.0, table);
  p.deg_ = 0;
  return p;
}

LambdaPoly LambdaPoly::of(const Expr& e) {
  LambdaPoly p = zero(e.table());
  p.c_[0] = e;
  p.recompute_degree();
  return p;
}

LambdaPoly LambdaPoly::from_coeffs(std::vector<Expr> coeffs) {
  if (coeffs.empty()) throw DimensionMismatch("empty coefficient list");
  if (coeffs.size() > std::size_t(kMaxDeg) + 1) {
    for (std::size_t k = std::size_t(kMaxDeg) + 1; k < coeffs.size(); ++k)
      if (!coeffs[k].is_zero())
        throw DegreeOverflow("coefficient at degree " + std::to_string(k));
    coeffs.resize(std::size_t(kMaxDeg) + 1);
  }
  TablePtr table;
  for (const auto& c : coeffs)
    if (c.table()) table = c.table();
  LambdaPoly p = zero(table);
  for (std::size_t k = 0; k < coeffs.size(); ++k) p.c_[k] = coeffs[k];
  p.recompute_degree();
  return p;
}

void LambdaPoly::recompute_degree() {
  deg_ = 0;
  for (int k = kMaxDeg; k > 0; --k)
    if (!c_[std::size_t(k)].is_zero()) {
      deg_ = k;
      break;
    }
}

LambdaPoly LambdaPoly::operator+(const LambdaPoly& o) const {
  LambdaPoly p = zero(table_ ? table_ : o.table_);
  for (int k = 0; k <= kMaxDeg; ++k)
    p.c_[std::size_t(k)] = c_[std::size_t(k)] + o.c_[std::size_t(k)];
  p.recompute_degree();
  return p;
}

LambdaPoly LambdaPoly::operator-(const LambdaPoly& o) const {
  LambdaPoly p = zero(table_ ? table_ : o.table_);
  for (int k = 0; k <= kMaxDeg; ++k)
    p.c_[std::size_t(k)] = c_[std::size_t(k)] - o.c_[std::size_t(k)];
  p.recompute_degree();
  return p;
}

LambdaPoly LambdaPoly::operator-() const {
  LambdaPoly p = zero(table_);
  for (int k = 0; k <= kMaxDeg; ++k) p.c_[std::size_t(k)] = -c_[std::size_t(k)];
  p.deg_ = deg_;
  return p;
}

LambdaPoly LambdaPoly::operator*(const LambdaPoly& o) const {
  if (is_zero() || o.is_zero()) return zero(table_ ? table_ : o.table_);
  if (deg_ + o.deg_ > kMaxDeg)
    throw DegreeOverflow("product of degrees " + std::to_string(deg_) + " and " +
                         std::to_string(o.deg_) + " exceeds " +
                         std::to_string(kMaxDeg));
  LambdaPoly p = zero(table_ ? table_ : o.table_);
  for (int i = 0; i <= deg_; ++i) {
    if (c_[std::size_t(i)].is_zero()) continue;
    for (int j = 0; j <= o.deg_; ++j) {
      if (o.c_[std::size_t(j)].is_zero()) continue;
      p.c_[std::size_t(i + j)] =
          p.c_[std::size_t(i + j)] + c_[std::size_t(i)] * o.c_[std::size_t(j)];
    }
  }
  p.recompute_degree();
  return p;
}

LambdaPoly LambdaPoly::operator*(const Expr& s) const {
  LambdaPoly p = zero(table_ ? table_ : s.table());
  for (int k = 0; k <= kMaxDeg; ++k) p.c_[std::size_t(k)] = c_[std::size_t(k)] * s;
  p.recompute_degree();
  return p;
}

LambdaPoly LambdaPoly::dlambda() const {
  LambdaPoly p = zero(table_);
  for (int k = 1; k <= kMaxDeg; ++k)
    p.c_[std::size_t(k - 1)] = c_[std::size_t(k)] * double(k);
  p.recompute_degree();
  return p;
}

LambdaPoly LambdaPoly::map_coeffs(
    const std::function<Expr(const Expr&)>& f) const {
  LambdaPoly p = zero(table_);
  for (int k = 0; k <= kMaxDeg; ++k) p.c_[std::size_t(k)] = f(c_[std::size_t(k)]);
  p.recompute_degree();
  return p;
}

double LambdaPoly::eval(const Environment& env, double lambda) const {
  double r = 0.0;
  for (int k = deg_; k >= 0; --k) r = r * lambda + c_[std::size_t(k)].eval(env);
  return r;
}

std::array<double, 5> LambdaPoly::eval_coeffs(const Environment& env) const {
  std::array<double, 5> out{};
  for (int k = 0; k <= kMaxDeg; ++k) out[std::size_t(k)] = c_[std::size_t(k)].eval(env);
  return out;
}

LambdaPoly wronskian(const LambdaPoly& m, const LambdaPoly& n) {
  TablePtr table = m.table() ? m.table() : n.table();
  std::array<Expr, 9> acc;
  for (auto& e : acc) e = Expr::constant(0.0, table);
  for (int i = 0; i <= m.degree(); ++i) {
    if (m.coeff(i).is_zero()) continue;
    for (int j = 0; j <= n.degree(); ++j) {
      if (j == i || n.coeff(j).is_zero()) continue;
      int k = i + j - 1;
      acc[std::size_t(k)] =
          acc[std::size_t(k)] + double(j - i) * (m.coeff(i) * n.coeff(j));
    }
  }
  for (int k = LambdaPoly::kMaxDeg + 1; k <= 8; ++k)
    if (!acc[std::size_t(k)].is_zero())
      throw DegreeOverflow("spectral wronskian coefficient at degree " +
                           std::to_string(k));
  return LambdaPoly::from_coeffs(
      std::vector<Expr>(acc.begin(), acc.begin() + LambdaPoly::kMaxDeg + 1));
}

}  // namespace subcurv
