#pragma once

// Replica orchestration. Replica r runs on seed seed_base ^ r and its result
// lands in slot r, so the output never depends on the worker count.

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <vector>

#include <omp.h>

#include "brw/errors.hpp"

namespace brw {

/// BRW_THREADS if set to a positive integer, else the OpenMP default.
inline int default_threads() {
  if (const char* env = std::getenv("BRW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

namespace detail {

// attempt 0 first; a CertificationError earns one retry with attempt 1.
template <typename Kernel>
auto call_with_retry(Kernel& kernel, std::uint64_t seed) {
  try {
    return kernel(seed, 0);
  } catch (const CertificationError&) {
    return kernel(seed, 1);
  }
}

}  // namespace detail

/// kernel(seed, attempt) -> T. The first exception by replica index is rethrown.
template <typename T, typename Kernel>
std::vector<T> run_replicas(std::uint64_t seed_base, std::size_t replicas, Kernel kernel, int threads = 0) {
  if (replicas == 0) throw ContractError("replicas must be at least 1");
  if (threads <= 0) threads = default_threads();
  std::vector<T> out(replicas);
  std::vector<std::exception_ptr> errors(replicas);
  const auto n = static_cast<std::int64_t>(replicas);
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
  for (std::int64_t r = 0; r < n; ++r) {
    const auto idx = static_cast<std::size_t>(r);
    try {
      out[idx] = detail::call_with_retry(kernel, seed_base ^ static_cast<std::uint64_t>(r));
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

/// Single-threaded reference with the same contract.
template <typename T, typename Kernel>
std::vector<T> run_replicas_serial(std::uint64_t seed_base, std::size_t replicas, Kernel kernel) {
  if (replicas == 0) throw ContractError("replicas must be at least 1");
  std::vector<T> out;
  out.reserve(replicas);
  for (std::size_t r = 0; r < replicas; ++r)
    out.push_back(detail::call_with_retry(kernel, seed_base ^ static_cast<std::uint64_t>(r)));
  return out;
}

}  // namespace brw
