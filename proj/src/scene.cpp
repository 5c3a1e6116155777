#include "subcurv/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "subcurv/chart.hpp"
#include "subcurv/curvature.hpp"
#include "subcurv/error.hpp"
#include "subcurv/expr.hpp"
#include "subcurv/fields.hpp"
#include "subcurv/lifts.hpp"
#include "subcurv/master.hpp"
#include "subcurv/pde.hpp"
#include "subcurv/rng.hpp"
#include "subcurv/sweep.hpp"
#include "subcurv/symbol.hpp"

namespace subcurv {

namespace {

using nlohmann::json;

// ------------------------------------------------------------- bundled ---

const std::map<std::string, std::string>& bundled_registry() {
  static const std::map<std::string, std::string> reg = {
      {"heavenly", R"json({
  "kind": "pde",
  "name": "heavenly",
  "problem": "heavenly",
  "params": { "c": 1.0 },
  "sample": { "seed": 20401, "count": 25, "box": [-1.0, 1.0] },
  "lambdas": [0.0, 1.0, -1.0, 2.0, -0.5],
  "tolerances": {
    "projection": 1e-10,
    "on_shell": 1e-9,
    "off_shell": 1e-3,
    "off_shell_fraction": 0.1
  }
})json"},
      {"fk", R"json({
  "kind": "pde",
  "name": "fk",
  "problem": "fk",
  "sample": { "seed": 30502, "count": 25, "box": [-1.0, 1.0] },
  "lambdas": [0.0, 1.0, -1.0, 2.0, -0.5],
  "tolerances": {
    "projection": 1e-10,
    "on_shell": 1e-9,
    "off_shell": 1e-3,
    "off_shell_fraction": 0.1
  }
})json"},
      {"flat-master", R"json({
  "kind": "master",
  "name": "flat-master",
  "fields": { "u": "0", "v": "1", "w": "0", "z": "0" },
  "sample": { "seed": 7701, "count": 25, "box": [-1.0, 1.0] },
  "covectors": 20,
  "tolerances": {
    "identity": 1e-9,
    "normality": 1e-9,
    "duality": 1e-10,
    "det_identity": 1e-10,
    "det_spread": 1e-8
  }
})json"},
      {"projective-random", R"json({
  "kind": "projective",
  "name": "projective-random",
  "connection": { "random": { "degree": 2, "amplitude": 0.5 } },
  "thomas": true,
  "sample": { "seed": 4242, "count": 25, "box": [-1.0, 1.0] },
  "tolerances": { "w": 1e-8, "unimodular": 1e-12 }
})json"},
      {"para-kahler-flat", R"json({
  "kind": "para-kahler",
  "name": "para-kahler-flat",
  "g": [["0","0","1","0"],
        ["0","0","0","1"],
        ["1","0","0","0"],
        ["0","1","0","0"]],
  "omega": [["0","0","1","0"],
            ["0","0","0","1"],
            ["-1","0","0","0"],
            ["0","-1","0","0"]],
  "omega0": ["0", "0", "y1", "y2"],
  "sample": { "seed": 9911, "count": 10, "box": [-1.0, 1.0] },
  "tolerances": {
    "w": 1e-10,
    "duality": 1e-10,
    "primitive": 1e-8,
    "expected_type": 1
  }
})json"}};
  return reg;
}

// -------------------------------------------------------------- parsing ---

[[noreturn]] void bad(const std::string& msg) { throw ConfigError(msg); }

double as_number(const json& j, const std::string& what) {
  if (!j.is_number()) bad(what + " must be a number");
  return j.get<double>();
}

std::string as_expr_string(const json& j, const std::string& what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number()) return j.dump();
  bad(what + " must be an expression string");
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      bad("unknown key \"" + it.key() + "\" in " + where);
}

void parse_sample(const json& j, SceneConfig& cfg) {
  if (!j.contains("sample") || !j["sample"].is_object())
    bad("scene needs a \"sample\" object");
  const json& s = j["sample"];
  check_keys(s, {"seed", "count", "box"}, "sample");
  if (!s.contains("seed")) bad("sample.seed is required");
  const json& sd = s["seed"];
  if (sd.is_number_integer() && sd.get<long long>() < 0)
    bad("sample.seed must be a non-negative integer");
  if (!sd.is_number_integer() && !sd.is_number_unsigned())
    bad("sample.seed must be an integer");
  cfg.seed = sd.get<std::uint64_t>();
  if (s.contains("count")) {
    if (!s["count"].is_number_integer() || s["count"].get<int>() < 1)
      bad("sample.count must be a positive integer");
    cfg.count = s["count"].get<int>();
  }
  if (s.contains("box")) {
    const json& b = s["box"];
    if (!b.is_array() || b.size() != 2) bad("sample.box must be [lo, hi]");
    cfg.box_lo = as_number(b[0], "sample.box[0]");
    cfg.box_hi = as_number(b[1], "sample.box[1]");
    if (!(cfg.box_lo < cfg.box_hi)) bad("sample.box needs lo < hi");
  }
}

void parse_common_tail(const json& j, SceneConfig& cfg) {
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) bad("tolerances must be an object");
    for (auto it = j["tolerances"].begin(); it != j["tolerances"].end(); ++it) {
      double v = as_number(it.value(), "tolerance \"" + it.key() + "\"");
      cfg.tolerances[it.key()] = v;
    }
  }
  if (j.contains("lambdas")) {
    if (!j["lambdas"].is_array() || j["lambdas"].empty())
      bad("lambdas must be a non-empty array of numbers");
    for (const auto& v : j["lambdas"])
      cfg.lambdas.push_back(as_number(v, "lambdas entry"));
  }
}

void parse_pde(const json& j, SceneConfig& cfg) {
  check_keys(j, {"kind", "name", "problem", "params", "sample", "lambdas",
                 "tolerances"},
             "scene");
  if (!j.contains("problem") || !j["problem"].is_string())
    bad("pde scene needs a \"problem\"");
  cfg.problem = j["problem"].get<std::string>();
  if (cfg.problem != "heavenly" && cfg.problem != "fk")
    bad("unknown problem \"" + cfg.problem + "\" (heavenly | fk)");
  if (j.contains("params")) {
    if (!j["params"].is_object()) bad("params must be an object");
    for (auto it = j["params"].begin(); it != j["params"].end(); ++it)
      cfg.params[it.key()] = as_number(it.value(), "param " + it.key());
  }
  if (cfg.problem == "heavenly" && !cfg.params.count("c"))
    cfg.params["c"] = 1.0;
}

void parse_master(const json& j, SceneConfig& cfg) {
  check_keys(j, {"kind", "name", "fields", "sample", "covectors", "tolerances"},
             "scene");
  if (!j.contains("fields") || !j["fields"].is_object())
    bad("master scene needs a \"fields\" object with u, v, w, z");
  check_keys(j["fields"], {"u", "v", "w", "z"}, "fields");
  for (const char* k : {"u", "v", "w", "z"}) {
    if (!j["fields"].contains(k)) bad(std::string("fields.") + k + " missing");
    cfg.fields[k] = as_expr_string(j["fields"][k], std::string("fields.") + k);
  }
  if (j.contains("covectors")) {
    if (!j["covectors"].is_number_integer() || j["covectors"].get<int>() < 1)
      bad("covectors must be a positive integer");
    cfg.covectors = j["covectors"].get<int>();
  }
}

void parse_projective(const json& j, SceneConfig& cfg) {
  check_keys(j, {"kind", "name", "connection", "thomas", "sample",
                 "tolerances"},
             "scene");
  if (!j.contains("connection") || !j["connection"].is_object())
    bad("projective scene needs a \"connection\" object");
  const json& c = j["connection"];
  check_keys(c, {"random", "entries"}, "connection");
  if (c.contains("random") == c.contains("entries"))
    bad("connection needs exactly one of \"random\" or \"entries\"");
  if (c.contains("random")) {
    cfg.random_connection = true;
    const json& r = c["random"];
    check_keys(r, {"degree", "amplitude"}, "connection.random");
    if (r.contains("degree")) {
      if (!r["degree"].is_number_integer()) bad("degree must be an integer");
      cfg.degree = r["degree"].get<int>();
      if (cfg.degree < 0 || cfg.degree > 3) bad("degree must be in 0..3");
    }
    if (r.contains("amplitude")) {
      cfg.amplitude = as_number(r["amplitude"], "amplitude");
      if (!(cfg.amplitude > 0)) bad("amplitude must be positive");
    }
  } else {
    if (!c["entries"].is_object() || c["entries"].empty())
      bad("connection.entries must be a non-empty object");
    for (auto it = c["entries"].begin(); it != c["entries"].end(); ++it) {
      const std::string& k = it.key();
      bool ok = k.size() == 3;
      for (char ch : k) ok = ok && ch >= '0' && ch <= '2';
      if (!ok) bad("entry key \"" + k + "\" must be three digits 0-2 (kij)");
      cfg.entries[k] = as_expr_string(it.value(), "entry " + k);
    }
  }
  if (j.contains("thomas")) {
    if (!j["thomas"].is_boolean()) bad("thomas must be a boolean");
    cfg.apply_thomas = j["thomas"].get<bool>();
  }
}

void parse_para_kahler(const json& j, SceneConfig& cfg) {
  check_keys(j, {"kind", "name", "g", "omega", "omega0", "sample",
                 "tolerances"},
             "scene");
  auto matrix = [&](const char* key) {
    if (!j.contains(key)) bad(std::string(key) + " (4x4) is required");
    const json& m = j[key];
    if (!m.is_array() || m.size() != 4) bad(std::string(key) + " must be 4x4");
    std::vector<std::vector<std::string>> out(4);
    for (int r = 0; r < 4; ++r) {
      if (!m[r].is_array() || m[r].size() != 4)
        bad(std::string(key) + " must be 4x4");
      for (int c = 0; c < 4; ++c)
        out[std::size_t(r)].push_back(as_expr_string(
            m[r][c], std::string(key) + " entry"));
    }
    return out;
  };
  cfg.g = matrix("g");
  cfg.om = matrix("omega");
  if (!j.contains("omega0") || !j["omega0"].is_array() ||
      j["omega0"].size() != 4)
    bad("omega0 must be an array of 4 expressions");
  for (int i = 0; i < 4; ++i)
    cfg.omega0.push_back(as_expr_string(j["omega0"][i], "omega0 entry"));
}

// ----------------------------------------------------------- check glue ---

bool has_value(const Report& r, const std::string& key) {
  for (const auto& p : r.points) {
    if (!p.ok) continue;
    for (const auto& kv : p.values)
      if (kv.first == key) return true;
  }
  return false;
}

// Sum of a 0/1 indicator over ok points, reported as a count.
CheckRecord count_check(const Report& r, const std::string& key,
                        const std::string& name, double tol) {
  CheckRecord c;
  c.name = name;
  c.tol = tol;
  c.worst = 0.0;
  c.worst_point = -1;
  for (const auto& p : r.points) {
    if (!p.ok) continue;
    for (const auto& kv : p.values)
      if (kv.first == key && kv.second > 0.5) {
        c.worst += 1.0;
        if (c.worst_point < 0) c.worst_point = p.index;
      }
  }
  c.pass = c.worst <= tol;
  return c;
}

// Mean of a 0/1 indicator over ok points.
CheckRecord fraction_check(const Report& r, const std::string& key,
                           const std::string& name, double tol) {
  CheckRecord c;
  c.name = name;
  c.tol = tol;
  c.worst = 0.0;
  c.worst_point = -1;
  int n = 0;
  for (const auto& p : r.points) {
    if (!p.ok) continue;
    for (const auto& kv : p.values)
      if (kv.first == key) {
        ++n;
        if (kv.second > 0.5) {
          c.worst += 1.0;
          if (c.worst_point < 0) c.worst_point = p.index;
        }
      }
  }
  if (n > 0) c.worst /= n;
  c.pass = n > 0 && c.worst <= tol;
  return c;
}

CheckRecord error_check(const Report& r) {
  CheckRecord c;
  c.name = "point_errors";
  c.tol = 0.0;
  c.worst = r.failed_points();
  c.worst_point = -1;
  for (const auto& p : r.points)
    if (!p.ok) {
      c.worst_point = p.index;
      break;
    }
  c.pass = c.worst <= 0.0;
  return c;
}

// ---------------------------------------------------------------- kinds ---

void run_pde_scene(const SceneConfig& cfg, Report& rep, bool parallel,
                   bool lax_only) {
  PDEProblem pb =
      cfg.problem == "heavenly" ? heavenly_problem() : fk_problem();
  {
    // surface bad parameter names before the sweep starts
    Environment probe(pb.jets->table());
    for (const auto& kv : cfg.params) probe.set(kv.first, kv.second);
  }
  TotalDerivation D(pb.jets);
  LaxPair lp(pb.lax_X, pb.lax_Y, D);
  std::vector<double> lams = cfg.lambdas;
  if (lams.empty()) lams = {0.0, 1.0, -1.0, 2.0, -0.5};
  const double off_level = cfg.tol("off_shell", 1e-3);
  const double proj_tol = cfg.tol("projection", 1e-10);
  const bool want_type = cfg.tolerances.count("expected_type") > 0;
  const int expected_type = cfg.tol("expected_type", 1.0) >= 0 ? 1 : -1;
  const Chart& base = pb.jets->base();
  const std::vector<int> jets = pb.jets->all_jet_ids(0);

  auto worker = [&](int i) {
    PointRecord rec;
    rec.index = i;
    Rng rng = Rng::stream(cfg.seed, std::uint64_t(i));
    Environment env(pb.jets->table());
    for (const auto& kv : cfg.params) env.set(kv.first, kv.second);
    double off_max = 0.0;
    bool projected = false;
    for (int attempt = 0; attempt < 50 && !projected; ++attempt) {
      for (int c = 0; c < 5; ++c)
        env.set(base.coord_ids[std::size_t(c)],
                rng.uniform(cfg.box_lo, cfg.box_hi));
      for (int id : jets) env.set(id, rng.uniform(cfg.box_lo, cfg.box_hi));
      try {
        off_max = 0.0;
        for (double l : lams) off_max = std::max(off_max, lp.defect(env, l));
        jet_project(pb, env, proj_tol);
        projected = true;
      } catch (const NotSolvable&) {
      } catch (const DependentGenerators&) {
      }
    }
    if (!projected)
      throw NotSolvable("no solvable jet in 50 draws at point " +
                        std::to_string(i));
    rec.put("off_shell_defect", off_max);
    rec.put("off_shell_missed", off_max > off_level ? 0.0 : 1.0);
    double res = 0.0;
    for (double r : relation_residuals(pb, env))
      res = std::max(res, std::abs(r));
    rec.put("projection_residual", res);
    double on = 0.0;
    for (double l : lams) on = std::max(on, lp.defect(env, l));
    rec.put("on_shell_defect", on);
    if (!lax_only) {
      Classification cl = classify(pb, env);
      rec.put("delta", cl.delta);
      rec.put("contact_volume", cl.volume);
      rec.put("noncontact", std::abs(cl.volume) <= 1e-6 ? 1.0 : 0.0);
      if (want_type)
        rec.put("wrong_type", cl.type == expected_type ? 0.0 : 1.0);
      rec.put("compat_defect", cl.compat.defect);
      rec.put("incompatible", cl.compat.compatible ? 0.0 : 1.0);
    }
    return rec;
  };
  rep.points = sweep_points(cfg.count, worker, parallel);

  rep.checks.push_back(
      max_check(rep, "projection_residual", proj_tol));
  rep.checks.push_back(max_check(rep, "on_shell_defect",
                                 cfg.tol("on_shell", 1e-9)));
  rep.checks.push_back(fraction_check(rep, "off_shell_missed",
                                      "off_shell_miss_fraction",
                                      cfg.tol("off_shell_fraction", 0.1)));
  if (!lax_only) {
    rep.checks.push_back(count_check(rep, "noncontact", "noncontact_points",
                                     cfg.tol("noncontact_points", 0.0)));
    rep.checks.push_back(count_check(rep, "incompatible",
                                     "incompatible_points",
                                     cfg.tol("incompatible_points", 0.0)));
    if (want_type)
      rep.checks.push_back(count_check(rep, "wrong_type", "wrong_type_points",
                                       cfg.tol("wrong_type_points", 0.0)));
  }
  rep.checks.push_back(error_check(rep));
}

void run_master_scene(const SceneConfig& cfg, Report& rep, bool parallel) {
  const MasterStructure& ms = master_structure();
  const MasterEval& me = MasterEval::instance();
  const Chart& base = ms.jets->base();

  std::array<Expr, 4> f;
  int fi = 0;
  for (const char* k : {"u", "v", "w", "z"}) {
    Expr e;
    try {
      e = parse(cfg.fields.at(k), ms.jets->table());
    } catch (const Error& err) {
      bad(std::string("fields.") + k + ": " + err.what());
    }
    for (int v : e.variables())
      if (std::find(base.coord_ids.begin(), base.coord_ids.end(), v) ==
          base.coord_ids.end())
        bad(std::string("fields.") + k + " must use only x, y, p, q, r");
    f[std::size_t(fi++)] = e;
  }
  SceneJets sj(ms.jets, {f[0], f[1], f[2], f[3]}, 2);
  LaxPair lp(ms.lift.X, ms.lift.Y, *ms.D);
  const VectorFieldL& C = lp.bracket();

  static const std::array<double, 6> nodes = {0.0, 1.0, -1.0, 2.0, -2.0, 3.0};
  Eigen::Matrix<double, 6, 6> V;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c)
      V(r, c) = std::pow(nodes[std::size_t(r)], c);
  Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> vlu(V);

  auto worker = [&](int i) {
    PointRecord rec;
    rec.index = i;
    Rng rng = Rng::stream(cfg.seed, std::uint64_t(i));
    Environment env(ms.jets->table());
    MasterPoint mp;
    bool placed = false;
    for (int attempt = 0; attempt < 50 && !placed; ++attempt) {
      for (int c = 0; c < 5; ++c)
        env.set(base.coord_ids[std::size_t(c)],
                rng.uniform(cfg.box_lo, cfg.box_hi));
      sj.fill(env);
      try {
        mp = me.at(env);
        placed = true;
      } catch (const VanishingV&) {
      }
    }
    if (!placed)
      throw VanishingV("v stays near zero after 50 draws at point " +
                       std::to_string(i));

    DualFrameValue df = dual_frame(ms.coframe, env);
    rec.put("duality", df.duality_residual);
    double vv = 4.0 * mp.v * mp.v;
    rec.put("det_defect", std::abs(ms.coframe_det.eval(env) - vv) /
                              (1.0 + std::abs(vv)));
    for (int k = 0; k <= 4; ++k)
      rec.put("w" + std::to_string(k), mp.lift_w[std::size_t(k)]);

    // the spectral part of [X, Y] interpolated at six nodes must be the
    // residual quartic itself, with nothing in degrees 4 and 5
    Eigen::Matrix<double, 6, 1> gv;
    for (int r = 0; r < 6; ++r)
      gv(r) = C.spectral.eval(env, nodes[std::size_t(r)]);
    Eigen::Matrix<double, 6, 1> cv = vlu.solve(gv);
    double scale = 1.0;
    for (double w : mp.lift_w) scale = std::max(scale, std::abs(w));
    double iden = std::max(std::abs(cv(4)), std::abs(cv(5)));
    for (int k = 0; k <= 3; ++k)
      iden = std::max(iden, std::abs(cv(k) - mp.lift_w[std::size_t(k)]));
    rec.put("identity_rel", iden / scale);

    double norm_def = 0.0;
    for (double l : nodes)
      for (int comp : {2, 3})
        norm_def = std::max(
            norm_def, std::abs(C.comp[std::size_t(comp)].eval(env, l)));
    rec.put("normality", norm_def);

    double rlo = 0.0, rhi = 0.0, ramp = 0.0;
    int got = 0;
    for (int t = 0; t < 3 * cfg.covectors && got < cfg.covectors; ++t) {
      Eigen::Matrix<double, 5, 1> th;
      for (int c = 0; c < 5; ++c) th(c) = rng.uniform(-1.0, 1.0);
      if (th.norm() < 1e-3) continue;
      th.normalize();
      try {
        double r = MasterEval::b_ratio(mp, th);
        rlo = got ? std::min(rlo, r) : r;
        rhi = got ? std::max(rhi, r) : r;
        ramp = std::max(ramp, std::abs(r));
        ++got;
      } catch (const QNearZero&) {
      }
    }
    if (got < 2)
      throw QNearZero("too few usable covectors at point " +
                      std::to_string(i));
    rec.put("bratio_spread", (rhi - rlo) / std::max(ramp, 1e-300));
    return rec;
  };
  rep.points = sweep_points(cfg.count, worker, parallel);

  rep.checks.push_back(max_check(rep, "duality", cfg.tol("duality", 1e-10)));
  rep.checks.push_back(
      max_check(rep, "det_defect", cfg.tol("det_identity", 1e-10)));
  rep.checks.push_back(
      max_check(rep, "identity_rel", cfg.tol("identity", 1e-9)));
  rep.checks.push_back(
      max_check(rep, "normality", cfg.tol("normality", 1e-9)));
  rep.checks.push_back(
      max_check(rep, "bratio_spread", cfg.tol("det_spread", 1e-6)));
  rep.checks.push_back(error_check(rep));
}

Expr random_poly3(const Chart& ch, Rng& rng, int degree, double amp) {
  Expr e = ch.c(rng.uniform(-amp, amp));
  for (int a = 0; a <= degree; ++a)
    for (int b = 0; a + b <= degree; ++b)
      for (int c = 0; a + b + c <= degree; ++c) {
        if (a + b + c == 0) continue;
        Expr m = ch.c(rng.uniform(-amp, amp));
        for (int t = 0; t < a; ++t) m = m * ch.coord(0);
        for (int t = 0; t < b; ++t) m = m * ch.coord(1);
        for (int t = 0; t < c; ++t) m = m * ch.coord(2);
        e = e + m;
      }
  return e;
}

void run_projective_scene(const SceneConfig& cfg, Report& rep,
                          bool parallel) {
  Chart ch = projective_chart();
  Christoffel G(ch);
  if (cfg.random_connection) {
    Rng crng = Rng::stream(cfg.seed, 0x636f6eull);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
          G.set(k, i, j, random_poly3(ch, crng, cfg.degree, cfg.amplitude));
  } else {
    for (const auto& kv : cfg.entries) {
      Expr e;
      try {
        e = parse(kv.second, ch.table);
      } catch (const Error& err) {
        bad("entry " + kv.first + ": " + err.what());
      }
      for (int v : e.variables())
        if (v != ch.coord_ids[0] && v != ch.coord_ids[1] &&
            v != ch.coord_ids[2])
          bad("entry " + kv.first + " must use only x0, x1, x2");
      G.set(kv.first[0] - '0', kv.first[1] - '0', kv.first[2] - '0', e);
    }
  }
  if (cfg.apply_thomas) G = thomas_symbols(G);
  ProjectiveLift L = projective_lift(G);
  Expr det = coframe_determinant(L.coframe);

  auto worker = [&](int i) {
    PointRecord rec;
    rec.index = i;
    Rng rng = Rng::stream(cfg.seed, std::uint64_t(i));
    Environment env(ch.table);
    for (int c = 0; c < 5; ++c)
      env.set(ch.coord_ids[std::size_t(c)],
              rng.uniform(cfg.box_lo, cfg.box_hi));
    double fm = 0.0;
    for (int l = 0; l < 5; ++l)
      for (int c = 0; c < 5; ++c)
        fm = std::max(fm,
                      std::abs(L.frame.e[std::size_t(l)][std::size_t(c)]
                                   .eval(env)));
    double w = 0.0;
    for (int k = 0; k <= 4; ++k)
      w = std::max(w, std::abs(L.W.coeff(k).eval(env)));
    rec.put("w_scaled", w / (1.0 + fm * fm));
    rec.put("unimodular", std::abs(det.eval(env) - 1.0));
    return rec;
  };
  rep.points = sweep_points(cfg.count, worker, parallel);

  rep.checks.push_back(max_check(rep, "w_scaled", cfg.tol("w", 1e-8)));
  rep.checks.push_back(
      max_check(rep, "unimodular", cfg.tol("unimodular", 1e-12)));
  rep.checks.push_back(error_check(rep));
}

void run_para_kahler_scene(const SceneConfig& cfg, Report& rep,
                           bool parallel) {
  Chart pc = Chart::create({"y1", "y2", "y3", "y4", "t"});
  ParaKahlerScene pk;
  pk.chart = pc;
  auto entry = [&](const std::string& text, const std::string& where) {
    Expr e;
    try {
      e = parse(text, pc.table);
    } catch (const Error& err) {
      bad(where + ": " + err.what());
    }
    for (int v : e.variables())
      if (v == pc.coord_ids[4]) bad(where + " must not use t");
    return e;
  };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      pk.g[std::size_t(r)][std::size_t(c)] = entry(
          cfg.g[std::size_t(r)][std::size_t(c)], "g entry");
      pk.Om[std::size_t(r)][std::size_t(c)] = entry(
          cfg.om[std::size_t(r)][std::size_t(c)], "omega entry");
    }
  for (int i = 0; i < 4; ++i)
    pk.omega0[std::size_t(i)] = entry(cfg.omega0[std::size_t(i)], "omega0");
  const double prim_tol = cfg.tol("primitive", 1e-8);
  const bool want_type = cfg.tolerances.count("expected_type") > 0;
  const int expected_type = cfg.tol("expected_type", 1.0) >= 0 ? 1 : -1;

  auto worker = [&](int i) {
    PointRecord rec;
    rec.index = i;
    Rng rng = Rng::stream(cfg.seed, std::uint64_t(i));
    Environment env(pc.table);
    for (int c = 0; c < 5; ++c)
      env.set(pc.coord_ids[std::size_t(c)],
              rng.uniform(cfg.box_lo, cfg.box_hi));
    Contactified ct = contactify(pk, env, prim_tol);
    rec.put("delta", ct.delta);
    rec.put("incompatible", ct.compat.compatible ? 0.0 : 1.0);
    rec.put("compat_defect", ct.compat.defect);
    if (want_type)
      rec.put("wrong_type",
              (ct.delta > 0 ? 1 : -1) == expected_type ? 0.0 : 1.0);
    double pair = 0.0;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        double s = 0.0;
        for (int c = 0; c < 5; ++c)
          s += ct.coframe.omega[std::size_t(a)].comp[std::size_t(c)].eval(
                   env) *
               ct.frame.e[std::size_t(b)][std::size_t(c)].eval(env);
        pair = std::max(pair, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    rec.put("duality", pair);
    if (ct.W) {
      double w = 0.0;
      for (int k = 0; k <= 4; ++k)
        w = std::max(w, std::abs(ct.W->coeff(k).eval(env)));
      rec.put("w_max", w);
    }
    return rec;
  };
  rep.points = sweep_points(cfg.count, worker, parallel);

  rep.checks.push_back(max_check(rep, "duality", cfg.tol("duality", 1e-10)));
  rep.checks.push_back(count_check(rep, "incompatible", "incompatible_points",
                                   cfg.tol("incompatible_points", 0.0)));
  if (want_type)
    rep.checks.push_back(count_check(rep, "wrong_type", "wrong_type_points",
                                     cfg.tol("wrong_type_points", 0.0)));
  if (has_value(rep, "w_max"))
    rep.checks.push_back(max_check(rep, "w_max", cfg.tol("w", 1e-10)));
  rep.checks.push_back(error_check(rep));
}

}  // namespace

// ----------------------------------------------------------- public api ---

double SceneConfig::tol(const std::string& key, double dflt) const {
  auto it = tolerances.find(key);
  return it == tolerances.end() ? dflt : it->second;
}

SceneConfig parse_scene(const std::string& json_text,
                        const std::string& name) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scene JSON: ") + e.what());
  }
  if (!j.is_object()) bad("scene must be a JSON object");
  SceneConfig cfg;
  if (j.contains("name") && !j["name"].is_string())
    bad("name must be a string");
  cfg.name = j.value("name", name);
  if (cfg.name.empty()) bad("scene needs a name");
  if (!j.contains("kind") || !j["kind"].is_string())
    bad("scene needs a \"kind\"");
  cfg.kind = j["kind"].get<std::string>();
  parse_sample(j, cfg);
  parse_common_tail(j, cfg);
  if (cfg.kind == "pde")
    parse_pde(j, cfg);
  else if (cfg.kind == "master")
    parse_master(j, cfg);
  else if (cfg.kind == "projective")
    parse_projective(j, cfg);
  else if (cfg.kind == "para-kahler")
    parse_para_kahler(j, cfg);
  else
    bad("unknown kind \"" + cfg.kind +
        "\" (pde | master | projective | para-kahler)");
  cfg.echo = j.dump();
  return cfg;
}

SceneConfig load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scene file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), std::filesystem::path(path).stem().string());
}

std::vector<std::string> bundled_scene_names() {
  std::vector<std::string> out;
  for (const auto& kv : bundled_registry()) out.push_back(kv.first);
  return out;
}

const std::string& bundled_scene_text(const std::string& name) {
  const auto& reg = bundled_registry();
  auto it = reg.find(name);
  if (it == reg.end()) throw ConfigError("no bundled scene named " + name);
  return it->second;
}

SceneConfig resolve_scene(const std::string& arg) {
  if (std::filesystem::exists(arg)) return load_scene_file(arg);
  std::string name = arg;
  if (name.size() > 6 && name.substr(name.size() - 6) == ".scene")
    name = name.substr(0, name.size() - 6);
  const auto& reg = bundled_registry();
  auto it = reg.find(name);
  if (it != reg.end()) return parse_scene(it->second, name);
  std::string known;
  for (const auto& kv : reg) known += (known.empty() ? "" : ", ") + kv.first;
  throw ConfigError("\"" + arg + "\" is neither a scene file nor a bundled " +
                    "scene (bundled: " + known + ")");
}

void override_seed(SceneConfig& cfg, std::uint64_t seed) {
  cfg.seed = seed;
  json j = json::parse(cfg.echo);
  j["sample"]["seed"] = seed;
  cfg.echo = j.dump();
}

void override_tolerance(SceneConfig& cfg, const std::string& key,
                        double value) {
  cfg.tolerances[key] = value;
  json j = json::parse(cfg.echo);
  j["tolerances"][key] = value;
  cfg.echo = j.dump();
}

std::string primary_tolerance_key(const std::string& kind) {
  if (kind == "pde") return "on_shell";
  if (kind == "master") return "identity";
  return "w";
}

Report run_scene(const SceneConfig& cfg, bool parallel, bool lax_only) {
  Report rep;
  rep.timestamp = utc_now();
  rep.scene = cfg.name;
  rep.kind = cfg.kind;
  rep.seed = cfg.seed;
  rep.config_echo = cfg.echo;
  if (cfg.kind == "pde")
    run_pde_scene(cfg, rep, parallel, lax_only);
  else if (cfg.kind == "master")
    run_master_scene(cfg, rep, parallel);
  else if (cfg.kind == "projective")
    run_projective_scene(cfg, rep, parallel);
  else if (cfg.kind == "para-kahler")
    run_para_kahler_scene(cfg, rep, parallel);
  else
    bad("unknown kind " + cfg.kind);
  return rep;
}

}  // namespace subcurv
