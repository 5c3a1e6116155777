#pragma once

// Scene configurations: a JSON description of what to build (a PDE, the
// model five-field structure, a projective connection, or a para-Kahler
// package), where to sample, and which tolerances to enforce. run_scene
// turns a config into a Report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subcurv/report.hpp"

namespace subcurv {

struct SceneConfig {
  std::string name;
  std::string kind;  // pde | master | projective | para-kahler

  // kind == pde
  std::string problem;  // heavenly | fk
  std::map<std::string, double> params;

  // kind == master: coefficient fields as expressions in x, y, p, q, r
  std::map<std::string, std::string> fields;

  // kind == projective: either explicit entries keyed "kij" (upper index
  // first, digits 0-2) or a seeded random polynomial connection
  std::map<std::string, std::string> entries;
  bool random_connection = false;
  int degree = 2;
  double amplitude = 0.5;
  bool apply_thomas = true;

  // kind == para-kahler: 4x4 entries of the metric and the two-form plus
  // the contact primitive, all expressions in y1..y4
  std::vector<std::vector<std::string>> g, om;
  std::vector<std::string> omega0;

  // sampling
  double box_lo = -1.0;
  double box_hi = 1.0;
  int count = 25;
  std::uint64_t seed = 0;

  std::map<std::string, double> tolerances;
  std::vector<double> lambdas;  // spectral samples for involutivity checks
  int covectors = 20;           // master: covectors per point for det ratios

  std::string echo;  // canonical JSON, reproduced in reports

  double tol(const std::string& key, double dflt) const;
};

// Parses a JSON scene. Malformed JSON, a missing seed, an unknown kind, or
// a schema violation throw ConfigError.
SceneConfig parse_scene(const std::string& json_text, const std::string& name);
SceneConfig load_scene_file(const std::string& path);

// Scenes compiled into the library; the same content ships in scenes/.
std::vector<std::string> bundled_scene_names();
const std::string& bundled_scene_text(const std::string& name);

// arg is a file path or a bundled name (with or without ".scene").
SceneConfig resolve_scene(const std::string& arg);

// Rewrites the sampling seed or a tolerance, keeping the echo in sync so
// reports reproduce the effective configuration.
void override_seed(SceneConfig& cfg, std::uint64_t seed);
void override_tolerance(SceneConfig& cfg, const std::string& key, double value);

// Principal tolerance key for --tol, per kind.
std::string primary_tolerance_key(const std::string& kind);

// Runs the pipeline selected by cfg.kind over cfg.count sampled points.
// lax_only restricts a pde scene to projection and involutivity checks.
Report run_scene(const SceneConfig& cfg, bool parallel = true,
                 bool lax_only = false);

}  // namespace subcurv
