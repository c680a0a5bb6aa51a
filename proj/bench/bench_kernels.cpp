// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

// Serial vs OpenMP timings for the three hot kernels.

#include <numeric>

#include <benchmark/benchmark.h>

#include "behave/align.hpp"
#include "behave/eval.hpp"
#include "behave/random.hpp"

namespace behave {
namespace {

std::vector<float> gaussian(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>(rng.normal());
  return v;
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_DistanceSums(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0)), dim = 64, k = 2;
  const auto points = gaussian(n * dim, 1);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>(i % k);
  std::vector<double> out(n * k);
  for (auto _ : state) {
    if (exec_of(state) == Exec::Parallel)
      cluster_distance_sums_parallel(points, dim, labels, k, out);
    else
      cluster_distance_sums_serial(points, dim, labels, k, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}
BENCHMARK(BM_DistanceSums)->ArgsProduct({{1000, 4000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_Projection(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  TrainConfig cfg;
  const auto p = make_projector(512, 512, cfg);
  const auto rows = gaussian(n * 512, 2);
  for (auto _ : state) benchmark::DoNotOptimize(project_rows(p, rows, exec_of(state)));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_Projection)->ArgsProduct({{256, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_BatchGradient(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  AlignmentData data;
  data.video_dim = 512;
  data.text_dim = 512;
  data.video = gaussian(n * 512, 3);
  data.text = gaussian(n * 512, 4);
  TrainConfig cfg;
  const auto p = make_projector(512, 512, cfg);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<float> grad(p.net().params().size());
  for (auto _ : state) {
    std::fill(grad.begin(), grad.end(), 0.0f);
    benchmark::DoNotOptimize(batch_gradient(p, data, order, {}, cfg, 0, 0, true, grad, exec_of(state)));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n));
}
BENCHMARK(BM_BatchGradient)->ArgsProduct({{128}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace behave

BENCHMARK_MAIN();
