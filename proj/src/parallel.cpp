// SPDX-License-Identifier: Apache-2.0
#include "tcqa/parallel.hpp"

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace tcqa {

int max_threads() noexcept {
#if defined(_OPENMP)
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace tcqa
