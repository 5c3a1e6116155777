#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace subcurv {

inline constexpr const char* kToolName = "subcurv";
inline constexpr const char* kToolVersion = "0.1.0";

// One sample point's outcome. `values` keeps insertion order so reports are
// reproducible byte for byte.
struct PointRecord {
  int index = -1;
  bool ok = true;
  std::string error;  // error kind when !ok
  std::vector<std::pair<std::string, double>> values;

  void put(std::string key, double v) { values.emplace_back(std::move(key), v); }
};

// A summary claim: `worst` is the extremal value over all points, attained
// at point `worst_point`, and passes when worst <= tol.
struct CheckRecord {
  std::string name;
  double worst = 0.0;
  int worst_point = -1;
  double tol = 0.0;
  bool pass = false;
};

struct Report {
  std::string version = kToolVersion;
  std::string timestamp;  // UTC; the one field two equal runs may differ in
  std::string scene;
  std::string kind;
  std::uint64_t seed = 0;
  std::string config_echo;  // canonical JSON of the configuration
  std::vector<PointRecord> points;
  std::vector<CheckRecord> checks;

  int failed_points() const;
  bool all_passed() const;
};

// Folds per-point values named `key` into a CheckRecord (max over points
// that have the key; points lacking it are skipped).
CheckRecord max_check(const Report& r, const std::string& key, double tol);

std::string to_text(const Report& r);
std::string to_json(const Report& r);
std::string utc_now();

}  // namespace subcurv
