#include "subcurv/chart.hpp"

#include <algorithm>
#include <functional>

namespace subcurv {

Chart Chart::create(std::vector<std::string> coords,
                    std::vector<std::string> extras) {
  std::vector<std::string> names = coords;
  names.insert(names.end(), extras.begin(), extras.end());
  Chart ch;
  ch.table = VariableTable::create(std::move(names));
  ch.coords = std::move(coords);
  for (const auto& c : ch.coords) ch.coord_ids.push_back(ch.table->index_of(c));
  return ch;
}

namespace {

// Sorted multi-indices over n coords with exactly k entries, lexicographic.
void enumerate_multi_indices(int n, int k, std::vector<std::vector<int>>& out) {
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int lo) {
    if (int(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = lo; i < n; ++i) {
      cur.push_back(i);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
}

std::string jet_var_name(const std::string& dep, const std::vector<int>& idx) {
  std::string s = dep;
  for (int i : idx) s += char('1' + i);
  return s;
}

}  // namespace

std::shared_ptr<const JetChart> JetChart::create(
    std::vector<std::string> coords, std::vector<std::string> deps, int order,
    std::vector<std::string> extras) {
  if (coords.size() > 9)
    throw ConfigError("jet charts support at most 9 coordinates (digit names)");
  auto jc = std::shared_ptr<JetChart>(new JetChart());
  jc->deps_ = deps;
  jc->order_ = order;

  const int n = int(coords.size());
  std::vector<std::string> names = coords;
  jc->first_jet_ = n;

  std::vector<std::vector<std::vector<int>>> indices_by_order(std::size_t(order) + 1);
  for (int k = 0; k <= order; ++k)
    enumerate_multi_indices(n, k, indices_by_order[std::size_t(k)]);

  jc->by_order_.resize(deps.size());
  for (std::size_t d = 0; d < deps.size(); ++d) {
    jc->by_order_[d].resize(std::size_t(order) + 1);
    for (int k = 0; k <= order; ++k)
      for (const auto& idx : indices_by_order[std::size_t(k)]) {
        jc->by_order_[d][std::size_t(k)].push_back(int(names.size()));
        names.push_back(jet_var_name(deps[d], idx));
      }
  }
  jc->last_jet_ = int(names.size());
  names.insert(names.end(), extras.begin(), extras.end());

  jc->chart_.table = VariableTable::create(std::move(names));
  jc->chart_.coords = coords;
  for (const auto& c : coords)
    jc->chart_.coord_ids.push_back(jc->chart_.table->index_of(c));

  // Derivative-shift table: id of sorted(idx + {coord}), or -1 at top order.
  jc->shift_.assign(std::size_t(jc->last_jet_ - jc->first_jet_),
                    std::vector<int>(std::size_t(n), -1));
  for (std::size_t d = 0; d < deps.size(); ++d)
    for (int k = 0; k < order; ++k) {
      const auto& level = indices_by_order[std::size_t(k)];
      for (std::size_t m = 0; m < level.size(); ++m) {
        int id = jc->by_order_[d][std::size_t(k)][m];
        for (int i = 0; i < n; ++i) {
          std::vector<int> up = level[m];
          up.push_back(i);
          std::sort(up.begin(), up.end());
          int up_id = jc->chart_.table->index_of(jet_var_name(deps[d], up));
          jc->shift_[std::size_t(id - jc->first_jet_)][std::size_t(i)] = up_id;
        }
      }
    }
  return jc;
}

int JetChart::jet_id(int dep, const std::vector<int>& idx) const {
  std::vector<int> sorted = idx;
  std::sort(sorted.begin(), sorted.end());
  int id = table()->index_of(jet_var_name(deps_[std::size_t(dep)], sorted));
  if (id < 0)
    throw ConstrainedJetMode("jet of order " + std::to_string(idx.size()) +
                             " exceeds stored order " + std::to_string(order_));
  return id;
}

std::vector<int> JetChart::jet_ids_of_order(int dep, int k) const {
  return by_order_[std::size_t(dep)][std::size_t(k)];
}

std::vector<int> JetChart::all_jet_ids(int dep) const {
  std::vector<int> out;
  for (int k = 0; k <= order_; ++k) {
    const auto& ids = jet_ids_of_order(dep, k);
    out.insert(out.end(), ids.begin(), ids.end());
  }
  return out;
}

bool JetChart::is_jet(int var_id) const {
  return var_id >= first_jet_ && var_id < last_jet_;
}

int JetChart::shift(int var_id, int coord) const {
  return shift_[std::size_t(var_id - first_jet_)][std::size_t(coord)];
}

Expr JetChart::total_derivative(const Expr& e, int coord) const {
  Expr out = e.diff(chart_.coord_ids[std::size_t(coord)]);
  for (int v : e.variables()) {
    if (!is_jet(v)) continue;
    Expr dv = e.diff(v);
    if (dv.is_zero()) continue;
    int up = shift(v, coord);
    if (up < 0)
      throw ConstrainedJetMode(
          "total derivative needs jets beyond stored order " +
          std::to_string(order_) + " (differentiating past " +
          table()->name(v) + ")");
    out = out + dv * Expr::variable(up, table());
  }
  return out;
}

SceneJets::SceneJets(JetChartPtr jc, std::vector<Expr> dep_functions,
                     int up_to_order)
    : jc_(std::move(jc)) {
  if (int(dep_functions.size()) != jc_->num_deps())
    throw DimensionMismatch("one function per dependent required");
  const int n = jc_->base().dim();
  for (const auto& f : dep_functions)
    for (int v : f.variables())
      if (jc_->is_jet(v))
        throw ConfigError("scene function may not reference jet variables");

  std::vector<Expr> roots;
  for (int d = 0; d < jc_->num_deps(); ++d) {
    // derivatives by order: level k+1 derives level k
    std::vector<std::pair<std::vector<int>, Expr>> level;
    level.push_back({{}, dep_functions[std::size_t(d)]});
    for (int k = 0; k <= up_to_order; ++k) {
      for (auto& [idx, e] : level) {
        ids_.push_back(jc_->jet_id(d, idx));
        roots.push_back(e);
      }
      if (k == up_to_order) break;
      std::vector<std::pair<std::vector<int>, Expr>> next;
      for (auto& [idx, e] : level)
        for (int i = (idx.empty() ? 0 : idx.back()); i < n; ++i) {
          std::vector<int> up = idx;
          up.push_back(i);
          next.push_back({up, e.diff(jc_->base().coord_ids[std::size_t(i)])});
        }
      level = std::move(next);
    }
  }
  prog_ = ExprProgram(roots);
}

void SceneJets::fill(Environment& env) const {
  std::vector<double> vals = prog_.eval(env);
  for (std::size_t i = 0; i < ids_.size(); ++i) env.set(ids_[i], vals[i]);
}

}  // namespace subcurv
