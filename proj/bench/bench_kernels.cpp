// OpenMP kernels against their serial references.
#include <benchmark/benchmark.h>

#include "coinsim/expression.hpp"
#include "coinsim/monte_carlo.hpp"

using namespace coinsim;

namespace {

const BlockSimulation& corpus_block() {
  static const BlockSimulation sim = rational_to_block(parse_rational("(p^3+1)/(p+2)"));
  return sim;
}

void BM_EnumerateClasses(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_classes(corpus_block()));
}
void BM_EnumerateClassesSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_classes_serial(corpus_block()));
}

MonteCarloConfig config(double p) {
  MonteCarloConfig c;
  c.p = p;
  c.n = 100000;
  return c;
}

void BM_SimulateRatio(benchmark::State& state) {
  const MachineDocument doc = builtin_automaton("ratio");
  for (auto _ : state) benchmark::DoNotOptimize(simulate(doc, config(0.3)));
}
void BM_SimulateRatioSerial(benchmark::State& state) {
  const MachineDocument doc = builtin_automaton("ratio");
  for (auto _ : state) benchmark::DoNotOptimize(simulate_serial(doc, config(0.3)));
}

void BM_SimulateBlock(benchmark::State& state) {
  const MachineDocument doc = corpus_block();
  for (auto _ : state) benchmark::DoNotOptimize(simulate(doc, config(0.7)));
}
void BM_SimulateBlockSerial(benchmark::State& state) {
  const MachineDocument doc = corpus_block();
  for (auto _ : state) benchmark::DoNotOptimize(simulate_serial(doc, config(0.7)));
}

}  // namespace

BENCHMARK(BM_EnumerateClasses)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_EnumerateClassesSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SimulateRatio)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateRatioSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateBlock)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SimulateBlockSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
