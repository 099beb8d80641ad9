#include "iondfs/decoherence.hpp"
#include "iondfs/dynamics.hpp"
#include "iondfs/hilbert.hpp"
#include "iondfs/modes.hpp"
#include "iondfs/pulse.hpp"

#include <benchmark/benchmark.h>

#include <numbers>

namespace {

using namespace iondfs;

constexpr double kPi = std::numbers::pi;

ModeSpectrum two_ion_modes() { return analyze_modes(IonArrayConfig::uniform(2, 1.0, 0.28125)).lowest(1); }

void BM_AnalyzeModes(benchmark::State& state) {
  const auto cfg = IonArrayConfig::uniform(static_cast<std::size_t>(state.range(0)), 1.0, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(analyze_modes(cfg));
}
BENCHMARK(BM_AnalyzeModes)->Arg(4)->Arg(16)->Arg(64);

void BM_CouplingPhaseBump(benchmark::State& state) {
  const auto modes = two_ion_modes();
  const auto s = design_adiabatic_schedule(modes, {0, 1}, -kPi / 4, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(coupling_phase(s, modes, {0, 1}));
}
BENCHMARK(BM_CouplingPhaseBump)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Propagate(benchmark::State& state) {
  const auto modes = two_ion_modes();
  const auto space = HilbertSpace::uniform(2, 1, static_cast<std::size_t>(state.range(0)));
  const auto s = design_refocused_schedule(modes, {0, 1}, kPi / 8, 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(propagate(s, modes, space));
}
BENCHMARK(BM_Propagate)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_RunOracleBump(benchmark::State& state) {
  const auto modes = two_ion_modes();
  const auto space = HilbertSpace::uniform(2, 1, 10);
  const auto s = design_adiabatic_schedule(modes, {0, 1}, -kPi / 4, 20);
  for (auto _ : state) benchmark::DoNotOptimize(run_oracle(s, modes, space, {0, 1}, {0, 1, 2}));
}
BENCHMARK(BM_RunOracleBump)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
