#include <benchmark/benchmark.h>

#include "pet_erg/config.hpp"
#include "pet_erg/gamma_d.hpp"
#include "pet_erg/harness.hpp"
#include "pet_erg/so3.hpp"

namespace {

using namespace pet_erg;

void BM_ExpMap(benchmark::State& state) {
  Vec3 v(0.3, -1.1, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp_map(v));
    v.x() += 1e-9;
  }
}
BENCHMARK(BM_ExpMap);

void BM_LogMap(benchmark::State& state) {
  const Rotation r = exp_map(Vec3(0.3, -1.1, 0.7));
  for (auto _ : state) benchmark::DoNotOptimize(log_map(r));
}
BENCHMARK(BM_LogMap);

void BM_ClosedLoopStep(benchmark::State& state) {
  const ScenarioConfig cfg = paper_scenario();
  BodyState s{cfg.R0, cfg.omega0};
  GovernorState g{Rotation(), true, 0.0};
  for (auto _ : state) {
    closed_loop_step(s, g, cfg.R_d, cfg.h, cfg.params);
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ClosedLoopStep);

void BM_GammaDOffline(benchmark::State& state) {
  const ScenarioConfig cfg = paper_scenario();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        gamma_d_offline(cfg.params.J, cfg.gains(), cfg.spec().tau_max, 1e-6));
  }
}
BENCHMARK(BM_GammaDOffline)->Unit(benchmark::kMicrosecond);

// Full nominal horizon, state.range(0) seconds.
void BM_Simulate(benchmark::State& state) {
  const ScenarioConfig cfg =
      paper_scenario({.t_final = static_cast<double>(state.range(0))});
  for (auto _ : state) benchmark::DoNotOptimize(simulate(cfg).log.size());
  state.SetItemsProcessed(state.iterations() * cfg.steps());
}
BENCHMARK(BM_Simulate)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
