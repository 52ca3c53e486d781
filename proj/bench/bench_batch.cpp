#include <benchmark/benchmark.h>

#include "mario_rl/batch.hpp"

using namespace mario_rl;

namespace {

std::vector<ExperimentConfig> configs(int n) {
  std::vector<ExperimentConfig> out;
  for (int i = 0; i < n; ++i) {
    ExperimentConfig c;
    c.episodes = 20;
    c.run_seed = 100 + i;
    out.push_back(c);
  }
  return out;
}

void BM_BatchSerial(benchmark::State& state) {
  const auto cs = configs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(cs));
}
BENCHMARK(BM_BatchSerial)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BatchParallel(benchmark::State& state) {
  const auto cs = configs(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_batch_parallel(cs));
}
BENCHMARK(BM_BatchParallel)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Episode(benchmark::State& state) {
  ExperimentConfig c;
  ScriptedAgent agent;
  Env env;
  const Level level = level_for_episode(c, 0);
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(env, level, agent));
}
BENCHMARK(BM_Episode);

}  // namespace

BENCHMARK_MAIN();
