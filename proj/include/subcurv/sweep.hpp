#pragma once

// Point sweeps: the same worker is run over every sample index, either
// serially or with OpenMP. Results are assembled by index, so the output
// is identical for both paths and for any thread count.

#include <functional>
#include <vector>

#include "subcurv/report.hpp"

namespace subcurv {

// Hard cap on worker threads. Reads SUBCURV_THREADS (>= 1) when set,
// otherwise the hardware concurrency.
int thread_cap();

// True when the library was built with OpenMP.
bool parallel_available();

// Runs fn(i) for i in [0, count). Exceptions thrown by fn never cross the
// loop: the worker is wrapped so a failed point becomes a record carrying
// the error kind, and the sweep continues.
std::vector<PointRecord> sweep_points(int count,
                                      const std::function<PointRecord(int)>& fn,
                                      bool parallel = true);

}  // namespace subcurv
