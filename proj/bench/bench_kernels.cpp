// Copyright 2026 The ensemblefuse Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference loops vs the OpenMP kernels on synthetic data.
//
//   ./ensemblefuse_bench --benchmark_filter=Loss
//   OMP_NUM_THREADS=8 ./ensemblefuse_bench

#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "ensemblefuse/ensemble.hpp"
#include "ensemblefuse/losses.hpp"
#include "ensemblefuse/metrics.hpp"
#include "ensemblefuse/reference.hpp"
#include "ensemblefuse/synthlab.hpp"

namespace {

using namespace ensemblefuse;

struct Fixture {
  LabelMatrix labels;
  std::vector<PredictionMatrix> models;
  ClassPrevalence prevalence;
};

const Fixture& fixture(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    synth::SynthConfig cfg;
    cfg.n_samples = n;
    auto data = synth::generate(cfg);
    Fixture f;
    f.models = synth::simulate_models(data.latents, data.labels.classes(), cfg);
    f.prevalence = compute_prevalence(data.labels);
    f.labels = std::move(data.labels);
    it = cache.emplace(n, std::move(f)).first;
  }
  return it->second;
}

void BM_CombinedLoss_Serial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::combined_loss(f.models[0], f.labels, f.prevalence));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CombinedLoss_OpenMP(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(combined_loss(f.models[0], f.labels, f.prevalence));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LossGrad_Serial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::combined_loss_grad(f.models[0], f.labels, f.prevalence));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_LossGrad_OpenMP(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(combined_loss_grad(f.models[0], f.labels, f.prevalence));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Evaluate_Serial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reference::evaluate(f.models[0], f.labels).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Evaluate_OpenMP(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(f.models[0], f.labels).mean);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Fuse_Serial(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const EnsembleWeights w({0.3, 0.7});
  for (auto _ : state) benchmark::DoNotOptimize(reference::fuse(f.models, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_Fuse_OpenMP(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  const EnsembleWeights w({0.3, 0.7});
  for (auto _ : state) benchmark::DoNotOptimize(fuse(f.models, w));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DEOptimize(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  DEConfig cfg;
  cfg.max_generations = 20;
  for (auto _ : state) benchmark::DoNotOptimize(de_optimize(f.models, f.labels, cfg).objective);
}

BENCHMARK(BM_CombinedLoss_Serial)->Arg(2000)->Arg(20000);
BENCHMARK(BM_CombinedLoss_OpenMP)->Arg(2000)->Arg(20000);
BENCHMARK(BM_LossGrad_Serial)->Arg(2000)->Arg(20000);
BENCHMARK(BM_LossGrad_OpenMP)->Arg(2000)->Arg(20000);
BENCHMARK(BM_Evaluate_Serial)->Arg(2000)->Arg(20000);
BENCHMARK(BM_Evaluate_OpenMP)->Arg(2000)->Arg(20000);
BENCHMARK(BM_Fuse_Serial)->Arg(2000)->Arg(20000);
BENCHMARK(BM_Fuse_OpenMP)->Arg(2000)->Arg(20000);
BENCHMARK(BM_DEOptimize)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
