// Copyright 2026 The spindet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP ensemble throughput.

#include <benchmark/benchmark.h>

#include "spindet/ensemble.hpp"

namespace {

spindet::EnsembleConfig bench_config(std::size_t trials) {
  spindet::EnsembleConfig c;
  c.params = spindet::ModelParams::simulation_preset(0.5);
  c.trials = trials;
  c.duration = 5.0 * c.params.tau1();
  c.master_seed = 1;
  return c;
}

void run(benchmark::State& state, spindet::Execution mode) {
  const auto cfg = bench_config(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto stats = spindet::run_ensemble(cfg, mode);
    benchmark::DoNotOptimize(stats.errors.bayes_wrong.data());
  }
  state.counters["trials/s"] = benchmark::Counter(
      static_cast<double>(state.iterations() * cfg.trials), benchmark::Counter::kIsRate);
}

void BM_EnsembleSerial(benchmark::State& state) { run(state, spindet::Execution::serial); }
void BM_EnsembleParallel(benchmark::State& state) { run(state, spindet::Execution::parallel); }

}  // namespace

BENCHMARK(BM_EnsembleSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EnsembleParallel)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
