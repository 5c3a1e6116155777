#pragma once

#include <memory>
#include <string>
#include <vector>

#include "subcurv/expr.hpp"

namespace subcurv {

// A coordinate chart: an ordered list of base coordinates inside a shared
// variable table (which may also hold jet variables, parameters, lambda...).
struct Chart {
  TablePtr table;
  std::vector<std::string> coords;
  std::vector<int> coord_ids;

  static Chart create(std::vector<std::string> coords,
                      std::vector<std::string> extras = {});

  int dim() const { return int(coords.size()); }
  Expr c(double v) const { return Expr::constant(v, table); }
  Expr var(std::string_view name) const { return Expr::variable(name, table); }
  Expr coord(int i) const { return Expr::variable(coord_ids[std::size_t(i)], table); }
};

// Differentiation of scalar fields along coordinate directions. Plain charts
// use partial derivatives; jet charts use total derivatives.
class Derivation {
public:
  virtual ~Derivation() = default;
  virtual Expr d(const Expr& e, int coord) const = 0;
  virtual const Chart& chart() const = 0;
};

class PlainDerivation final : public Derivation {
public:
  explicit PlainDerivation(Chart chart) : chart_(std::move(chart)) {}
  Expr d(const Expr& e, int coord) const override {
    return e.diff(chart_.coord_ids[std::size_t(coord)]);
  }
  const Chart& chart() const override { return chart_; }

private:
  Chart chart_;
};

// Chart extended with jet variables of one or more dependent functions, up to
// a fixed order. Jet variables are named dep + sorted 1-based coordinate
// digits: u, u1, u15, u115, ... The table layout is
//   coords, then per dependent all jets by order, then extras.
class JetChart {
public:
  static std::shared_ptr<const JetChart> create(
      std::vector<std::string> coords, std::vector<std::string> deps,
      int order, std::vector<std::string> extras = {});

  const Chart& base() const { return chart_; }
  const TablePtr& table() const { return chart_.table; }
  int order() const { return order_; }
  int num_deps() const { return int(deps_.size()); }
  const std::string& dep_name(int dep) const { return deps_[std::size_t(dep)]; }

  // Multi-index `idx` is a sorted list of 0-based coordinate indices; empty
  // means the dependent itself.
  int jet_id(int dep, const std::vector<int>& idx) const;
  Expr jet(int dep, const std::vector<int>& idx) const {
    return Expr::variable(jet_id(dep, idx), table());
  }
  std::vector<int> jet_ids_of_order(int dep, int k) const;
  // All jet ids of one dependent, all orders 0..order().
  std::vector<int> all_jet_ids(int dep) const;

  bool is_jet(int var_id) const;
  // Variable id of the coord-derivative of jet var `var_id`; -1 when that
  // would exceed the stored order.
  int shift(int var_id, int coord) const;

  // Total derivative D_i = ∂_i + Σ_α dep_{α+i} ∂_{dep_α}. Throws
  // ConstrainedJetMode when a required jet exceeds the stored order.
  Expr total_derivative(const Expr& e, int coord) const;

private:
  JetChart() = default;
  Chart chart_;
  std::vector<std::string> deps_;
  int order_ = 0;
  int first_jet_ = 0, last_jet_ = 0;          // id range of jet vars
  std::vector<std::vector<int>> shift_;       // [var_id - first_jet_][coord]
  std::vector<std::vector<std::vector<int>>> by_order_;  // [dep][order] -> ids
};

using JetChartPtr = std::shared_ptr<const JetChart>;

class TotalDerivation final : public Derivation {
public:
  explicit TotalDerivation(JetChartPtr jc) : jc_(std::move(jc)) {}
  Expr d(const Expr& e, int coord) const override {
    return jc_->total_derivative(e, coord);
  }
  const Chart& chart() const override { return jc_->base(); }
  const JetChartPtr& jet_chart() const { return jc_; }

private:
  JetChartPtr jc_;
};

// Prolongation of explicit dependent functions: precompiles all jet values of
// the given dependents (Exprs over the chart's coordinates only) so that an
// environment holding the base point can be completed with jet values.
class SceneJets {
public:
  SceneJets(JetChartPtr jc, std::vector<Expr> dep_functions, int up_to_order);
  // env must have coordinates (and any extras the functions use) set.
  void fill(Environment& env) const;

private:
  JetChartPtr jc_;
  std::vector<int> ids_;
  ExprProgram prog_;
};

}  // namespace subcurv
