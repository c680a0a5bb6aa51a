// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace behave {

/// Serial runs the reference loop; Parallel uses OpenMP when the library was
/// built with it. Both produce bit-identical results.
enum class Exec { Serial, Parallel };

/// Threads OpenMP would use (1 without OpenMP).
int parallel_threads() noexcept;
bool openmp_enabled() noexcept;

/// Work is always cut into this many chunks, whatever the thread count, so the
/// floating-point reduction order never depends on the machine.
inline constexpr std::size_t kReductionChunks = 8;

/// Sums fn(item, grad) over items into `out` (overwritten). Each chunk of
/// consecutive items accumulates into its own buffer, then chunk buffers are
/// added in chunk order. fn returns the item's loss; the summed loss is returned.
template <typename Real, typename Fn>
double accumulate_chunked(std::size_t n_items, std::span<Real> out, Fn&& fn, Exec exec) {
  const std::size_t chunks = std::min(kReductionChunks, std::max<std::size_t>(n_items, 1));
  std::vector<std::vector<Real>> partial(chunks, std::vector<Real>(out.size(), Real(0)));
  std::vector<double> losses(chunks, 0.0);
  std::vector<std::exception_ptr> errors(chunks);
  const auto run_chunk = [&](std::size_t c) {
    const std::size_t begin = n_items * c / chunks;
    const std::size_t end = n_items * (c + 1) / chunks;
    try {
      for (std::size_t i = begin; i < end; ++i) losses[c] += fn(i, std::span<Real>(partial[c]));
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  if (exec == Exec::Serial) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    const long n = static_cast<long>(chunks);
#pragma omp parallel for schedule(static)
    for (long c = 0; c < n; ++c) run_chunk(static_cast<std::size_t>(c));
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::fill(out.begin(), out.end(), Real(0));
  double loss = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += partial[c][k];
    loss += losses[c];
  }
  return loss;
}

}  // namespace behave
