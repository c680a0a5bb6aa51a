// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace behave {

int parallel_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool openmp_enabled() noexcept {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

}  // namespace behave
