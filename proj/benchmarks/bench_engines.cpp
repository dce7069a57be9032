#include "quartet/experiments.hpp"

#include <benchmark/benchmark.h>

using namespace quartet;

namespace {

PulseSequence echo() {
  return build_echo_sequence(0.6e-6, 0.6e-6, Mode::Duplex, ReadoutPhase::PlusMinusY,
                             Acquisition::A, QuartetParams{});
}

void BM_EchoBlock(benchmark::State& state) {
  const QuartetParams p;
  const PulseSequence seq = echo();
  const AcField ac{5e-6, synchronized_ac_frequency(0.6e-6, 50e-9), 0.0, Parity::Magnetic};
  for (auto _ : state) benchmark::DoNotOptimize(run_sequence(seq, ac, p).intensity);
}
BENCHMARK(BM_EchoBlock);

void BM_EchoNumeric(benchmark::State& state) {
  const QuartetParams p;
  const PulseSequence seq = echo();
  RunOptions o;
  o.engine = Engine::Numeric;
  o.numeric_dt = static_cast<double>(state.range(0)) * 1e-12;
  for (auto _ : state) benchmark::DoNotOptimize(run_sequence(seq, std::nullopt, p, o).intensity);
}
BENCHMARK(BM_EchoNumeric)->Arg(100)->Arg(50);

void BM_AmplitudeScan(benchmark::State& state) {
  const SimulationSettings s;
  const auto b = linspace(-20e-6, 20e-6, 41);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ac_response_amplitude_scan(b, 0.6e-6, ReadoutPhase::PlusMinusY, Mode::Duplex, s));
}
BENCHMARK(BM_AmplitudeScan)->Unit(benchmark::kMillisecond);

void BM_EnsembleEcho(benchmark::State& state) {
  SimulationSettings s;
  s.ensemble_samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        echo_signal(0.6e-6, 0.6e-6, Mode::Duplex, ReadoutPhase::PlusMinusX, std::nullopt, s));
}
BENCHMARK(BM_EnsembleEcho)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
