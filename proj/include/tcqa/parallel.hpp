// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

namespace tcqa {

/// Every data-parallel kernel ships a serial reference path; tests compare
/// the two and the benchmark times them.
enum class ExecPolicy { Serial, Parallel };

/// Threads the parallel path will use (1 when built without OpenMP).
int max_threads() noexcept;

/// Runs body(i) for i in [0, n). Iterations must write disjoint state and
/// must not throw.
template <typename Body>
void parallel_for(std::size_t n, ExecPolicy policy, Body&& body) {
  if (policy == ExecPolicy::Serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 4)
  for (long long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace tcqa
