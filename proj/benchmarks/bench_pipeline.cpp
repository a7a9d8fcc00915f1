// Copyright 2026 the ddframe authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include "ddframe/pipeline.hpp"

namespace {

using namespace ddframe;

void BM_BuildPipeline(benchmark::State& state) {
  const MeshConfig cfg(static_cast<int>(state.range(0)), 1.0, 1.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_pipeline(cfg));
  }
}
BENCHMARK(BM_BuildPipeline)->DenseRange(1, 5);

void BM_GramianSolve(benchmark::State& state) {
  const MeshConfig cfg(static_cast<int>(state.range(0)), 1.0, 1.5);
  const BandedOperator op = build_subdivision_operator(cfg);
  const WindowedVector g = regular_gram(dd_mask(cfg.n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(semiregular_gram(op, g, cfg));
  }
}
BENCHMARK(BM_GramianSolve)->DenseRange(1, 5);

void BM_SpectralFactor(benchmark::State& state) {
  const Filter p = dd_mask(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(daubechies_factor(p));
  }
}
BENCHMARK(BM_SpectralFactor)->DenseRange(1, 8);

void BM_CascadeSample(benchmark::State& state) {
  const MeshConfig cfg(2, 1.0, 2.0);
  const BandedOperator op = build_subdivision_operator(cfg);
  const WindowedVector delta{{0, 0}, Eigen::VectorXd::Ones(1)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(cascade_sample(op, delta, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_CascadeSample)->Arg(6)->Arg(9)->Arg(12);

void BM_VerifyFrame(benchmark::State& state) {
  const Pipeline pl = build_pipeline(MeshConfig(2, 1.0, 2.0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_frame(pl));
  }
}
BENCHMARK(BM_VerifyFrame);

}  // namespace

BENCHMARK_MAIN();
