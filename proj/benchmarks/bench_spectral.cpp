#include <benchmark/benchmark.h>

#include "msalab/lab.hpp"
#include "msalab/spectral.hpp"

using namespace msalab;

namespace {

FiniteVolumeOperator pair_op(int radius) {
  ModelConfig m;
  m.dim_per_particle = 1;
  m.particles = 2;
  m.field = AmplitudeField{AmplitudeLaw::Uniform, 10.0, 1.0, 4242};
  m.interaction = InteractionPotential{InteractionKind::Step, 0.5, 1.0};
  const LatticeBox box{Point{0, 0}, radius, 1, 2};
  return FiniteVolumeOperator::assemble(box, m.mesh,
                                        alloy_potential(m.field, m.profile, m.interaction, 1, 2));
}

}  // namespace

static void BM_WindowSpectrum(benchmark::State& state) {
  const auto op = pair_op(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto win = spectrum_window(op, 2.5, false, SpectralOptions{});
    benchmark::DoNotOptimize(win);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_WindowSpectrum)->Arg(8)->Arg(16)->Arg(23)->Complexity();

static void BM_GroundState(benchmark::State& state) {
  const auto op = pair_op(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto eigs = smallest_eigenvalues(op, 1, false);
    benchmark::DoNotOptimize(eigs);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GroundState)->Arg(8)->Arg(16)->Arg(23)->Complexity();

static void BM_CountBelow(benchmark::State& state) {
  const auto op = pair_op(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(eigenvalue_count_below(op, 2.5));
  }
}
BENCHMARK(BM_CountBelow)->Arg(8)->Arg(16)->Arg(23);

BENCHMARK_MAIN();
