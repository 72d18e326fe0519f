#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <vector>

namespace plainscore {

/// Selects the serial reference loop or the OpenMP loop for per-item kernels.
/// Both produce identical, input-ordered results.
enum class Execution { kSerial, kParallel };

/// out[i] = fn(i) for i in [0, n). The first exception thrown by any item is
/// rethrown after the loop; with kParallel "first" means lowest index.
template <typename Fn>
auto indexed_map(std::size_t n, Execution exec, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> out(n);
  if (exec == Execution::kSerial) {
    for (std::size_t i = 0; i < n; ++i) {
      out[i] = fn(i);
    }
    return out;
  }
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      out[idx] = fn(idx);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
  return out;
}

int max_threads();

}  // namespace plainscore
