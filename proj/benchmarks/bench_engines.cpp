#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "ldspec/birman_schwinger.hpp"
#include "ldspec/fit.hpp"
#include "ldspec/floquet.hpp"
#include "ldspec/susy.hpp"

using namespace ldspec;

namespace {

constexpr double pi = std::numbers::pi;

const Model& kronig_penney() {
  static const Model m = build_model({"kronig_penney", {{"alpha", 1.0}}});
  return m;
}

const Model& peakon() {
  static const Model m = build_model({"ch_peakon", {}});
  return m;
}

const MiuraField& half_cos() {
  static const MiuraField phi(fit_periodic([](double x) { return 0.5 + std::cos(x); }, 2 * pi));
  return phi;
}

// Exact piece propagators only.
void BM_MonodromyKronigPenney(benchmark::State& state) {
  const Model& m = kronig_penney();
  double z = 3.7;
  for (auto _ : state) benchmark::DoNotOptimize(monodromy(m.q, m.r, z));
}
BENCHMARK(BM_MonodromyKronigPenney);

// Fitted density: adaptive Runge-Kutta over every piece.
void BM_MonodromyPeakon(benchmark::State& state) {
  const Model& m = peakon();
  for (auto _ : state) benchmark::DoNotOptimize(monodromy(m.q, m.r, -2.3, 1e-10, 0.0, state.range(0) != 0));
}
BENCHMARK(BM_MonodromyPeakon)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_StabilityIntervals(benchmark::State& state) {
  const Model& m = kronig_penney();
  for (auto _ : state) benchmark::DoNotOptimize(stability_intervals(m.q, m.r, 0.01, state.range(0)));
}
BENCHMARK(BM_StabilityIntervals)->Arg(20)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_BirmanSchwinger(benchmark::State& state) {
  const Model& m = peakon();
  for (auto _ : state) benchmark::DoNotOptimize(bs_spectrum(m.q, m.r, 0.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_BirmanSchwinger)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_PartnerSpectra(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(schrodinger_pair_spectra(half_cos(), 0.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_PartnerSpectra)->RangeMultiplier(2)->Range(16, 128)->Unit(benchmark::kMillisecond);

void BM_EigvecTransfer(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(eigvec_transfer_check(half_cos(), 0.0, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_EigvecTransfer)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
