#include "subcurv/report.hpp"

#include <cstdio>
#include <ctime>
#include <sstream>

#include <nlohmann/json.hpp>

namespace subcurv {

int Report::failed_points() const {
  int n = 0;
  for (const auto& p : points) n += p.ok ? 0 : 1;
  return n;
}

bool Report::all_passed() const {
  if (failed_points() > 0) return false;
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

CheckRecord max_check(const Report& r, const std::string& key, double tol) {
  CheckRecord c;
  c.name = key;
  c.tol = tol;
  for (const auto& p : r.points) {
    if (!p.ok) continue;
    for (const auto& [k, v] : p.values)
      if (k == key && (c.worst_point < 0 || v > c.worst)) {
        c.worst = v;
        c.worst_point = p.index;
      }
  }
  c.pass = c.worst_point >= 0 && c.worst <= tol;
  return c;
}

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string to_text(const Report& r) {
  std::ostringstream os;
  os << kToolName << " " << r.version << "\n";
  os << "time: " << r.timestamp << "\n";
  os << "scene: " << r.scene << " (" << r.kind << ")\n";
  os << "seed: " << r.seed << "\n";
  os << "config: " << r.config_echo << "\n";
  os << "points: " << r.points.size() << " sampled, " << r.failed_points()
     << " failed\n";
  for (const auto& p : r.points) {
    os << "  [" << p.index << "]";
    if (!p.ok) {
      os << " error " << p.error << "\n";
      continue;
    }
    for (const auto& [k, v] : p.values) os << " " << k << "=" << num(v);
    os << "\n";
  }
  os << "checks:\n";
  for (const auto& c : r.checks) {
    os << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << ": worst "
       << num(c.worst) << " vs tol " << num(c.tol);
    if (c.worst_point >= 0) os << " (point " << c.worst_point << ")";
    os << "\n";
  }
  os << "result: " << (r.all_passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

std::string to_json(const Report& r) {
  nlohmann::ordered_json j;
  j["tool"] = kToolName;
  j["version"] = r.version;
  j["timestamp"] = r.timestamp;
  j["scene"] = r.scene;
  j["kind"] = r.kind;
  j["seed"] = r.seed;
  j["config"] = nlohmann::ordered_json::parse(r.config_echo);
  auto& pts = j["points"] = nlohmann::ordered_json::array();
  for (const auto& p : r.points) {
    nlohmann::ordered_json jp;
    jp["index"] = p.index;
    jp["ok"] = p.ok;
    if (!p.ok) jp["error"] = p.error;
    for (const auto& [k, v] : p.values) jp[k] = v;
    pts.push_back(std::move(jp));
  }
  auto& cks = j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["worst"] = c.worst;
    jc["worst_point"] = c.worst_point;
    jc["tol"] = c.tol;
    jc["pass"] = c.pass;
    cks.push_back(std::move(jc));
  }
  j["passed"] = r.all_passed();
  return j.dump(2) + "\n";
}

}  // namespace subcurv
