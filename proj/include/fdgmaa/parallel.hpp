#pragma once

#include <cstddef>
#include <exception>
#include <vector>

namespace fdgmaa {

/// Selects between the OpenMP kernels and the serial reference path. Both
/// paths do the same per-index work, so results are bit-identical.
enum class Execution { serial, parallel };

/// Runs body(i) for i in [0, count). Iterations must be independent. The first
/// exception (by index) thrown inside the loop is rethrown after the loop.
template <class Body>
void for_each_index(Execution exec, std::size_t count, Body&& body) {
  if (exec == Execution::serial || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace fdgmaa
