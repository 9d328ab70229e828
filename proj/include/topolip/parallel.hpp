#pragma once

#include <cstddef>
#include <functional>

namespace topolip {

/// Worker count: hardware concurrency, capped by the TOPOLIP_THREADS
/// environment variable when it holds a positive integer.
std::size_t threadCount();

/// Runs body(i) for i in [0, count). Each index is visited exactly once; the
/// caller writes results into per-index slots so output order never depends
/// on the schedule. The first exception thrown by any body is rethrown.
void parallelFor(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace topolip
