#include "subcurv/sweep.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>

#include "subcurv/error.hpp"

#ifdef SUBCURV_HAVE_OPENMP
#include <omp.h>
#endif

namespace subcurv {

int thread_cap() {
  unsigned hw = std::thread::hardware_concurrency();
  int cap = hw ? static_cast<int>(hw) : 1;
  if (const char* s = std::getenv("SUBCURV_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end != s && *end == '\0' && v >= 1)
      cap = static_cast<int>(std::min(v, 1024L));
  }
  return cap;
}

bool parallel_available() {
#ifdef SUBCURV_HAVE_OPENMP
  return true;
#else
  return false;
#endif
}

namespace {

// OpenMP regions must not leak exceptions, so every failure is converted
// to a record here, inside the worker.
PointRecord guarded(const std::function<PointRecord(int)>& fn, int i) {
  try {
    return fn(i);
  } catch (const Error& e) {
    PointRecord rec;
    rec.index = i;
    rec.ok = false;
    rec.error = e.what();  // already "Kind: context"
    return rec;
  } catch (const std::exception& e) {
    PointRecord rec;
    rec.index = i;
    rec.ok = false;
    rec.error = std::string("unexpected: ") + e.what();
    return rec;
  }
}

}  // namespace

std::vector<PointRecord> sweep_points(int count,
                                      const std::function<PointRecord(int)>& fn,
                                      bool parallel) {
  std::vector<PointRecord> out(static_cast<std::size_t>(std::max(count, 0)));
#ifdef SUBCURV_HAVE_OPENMP
  if (parallel && count > 1) {
    int threads = std::min(thread_cap(), count);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int i = 0; i < count; ++i)
      out[std::size_t(i)] = guarded(fn, i);
    return out;
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < count; ++i)
    out[std::size_t(i)] = guarded(fn, i);
  return out;
}

}  // namespace subcurv
