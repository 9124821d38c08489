#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace centrakit {

/// Output formatting: 10 significant digits, "nan"/"inf" never emitted by callers.
std::string format_number(double x);
/// Rounds to 10 significant digits so JSON dumps are stable.
double round_significant(double x);

/// Worker cap from CENTRAKIT_THREADS, else hardware concurrency (at least 1).
std::size_t worker_count();

/// Runs body(0..count-1) on up to worker_count() threads. The first exception thrown by any
/// task is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

/// Derives an independent 64-bit seed from a master seed and a path of stream ids.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0);

} // namespace centrakit
