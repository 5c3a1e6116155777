// Times the point sweep of a scene in serial and parallel and verifies the
// two runs produce identical records.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "CLI11.hpp"

#include "subcurv/scene.hpp"
#include "subcurv/sweep.hpp"

using namespace subcurv;

namespace {

template <typename F>
double best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

bool same_records(const Report& a, const Report& b) {
  if (a.points.size() != b.points.size()) return false;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const PointRecord& p = a.points[i];
    const PointRecord& q = b.points[i];
    if (p.index != q.index || p.ok != q.ok || p.error != q.error) return false;
    if (p.values.size() != q.values.size()) return false;
    for (std::size_t k = 0; k < p.values.size(); ++k)
      if (p.values[k].first != q.values[k].first ||
          p.values[k].second != q.values[k].second)
        return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel sweep benchmark"};
  int count = 200;
  std::uint64_t seed = 1;
  int reps = 3;
  std::string kind = "master";
  app.add_option("--count", count, "points per sweep")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "sampling seed");
  app.add_option("--reps", reps, "repetitions, best time reported")
      ->check(CLI::PositiveNumber);
  app.add_option("--kind", kind, "which pipeline to time")
      ->check(CLI::IsMember({"master", "pde", "projective"}));
  CLI11_PARSE(app, argc, argv);

  SceneConfig cfg;
  if (kind == "master") {
    cfg = parse_scene(R"({
      "kind": "master", "name": "bench",
      "fields": { "u": "sin(x)*q", "v": "1 + 0.2*p*q",
                  "w": "x*y + r", "z": "cos(y)*p" },
      "sample": { "seed": 1, "count": 1 },
      "covectors": 20,
      "tolerances": { "det_spread": 1e-6 }
    })",
                      "bench");
  } else if (kind == "pde") {
    cfg = resolve_scene("heavenly");
  } else {
    cfg = resolve_scene("projective-random");
  }
  cfg.count = count;
  override_seed(cfg, seed);

  Report rs, rp;
  double ts = best_of(reps, [&] { rs = run_scene(cfg, false); });
  double tp = best_of(reps, [&] { rp = run_scene(cfg, true); });
  bool same = same_records(rs, rp);

  std::printf("kind      %s\n", kind.c_str());
  std::printf("points    %d\n", count);
  std::printf("threads   <= %d%s\n", thread_cap(),
              parallel_available() ? "" : " (built without OpenMP)");
  std::printf("serial    %8.3f s\n", ts);
  std::printf("parallel  %8.3f s\n", tp);
  std::printf("speedup   %8.2fx\n", tp > 0 ? ts / tp : 0.0);
  std::printf("records   %s\n", same ? "identical" : "MISMATCH");
  return same ? 0 : 1;
}
