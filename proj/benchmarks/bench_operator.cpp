#include <benchmark/benchmark.h>

#include "msalab/lab.hpp"
#include "msalab/operator.hpp"

using namespace msalab;

namespace {

ModelConfig bench_model(int particles) {
  ModelConfig m;
  m.dim_per_particle = 1;
  m.particles = particles;
  m.field = AmplitudeField{AmplitudeLaw::Uniform, 10.0, 1.0, 12345};
  m.interaction = InteractionPotential{InteractionKind::Step, 0.5, 1.0};
  return m;
}

}  // namespace

static void BM_AssembleSingle(benchmark::State& state) {
  const ModelConfig m = bench_model(1);
  const LatticeBox box{Point{0}, static_cast<int>(state.range(0)), 1, 1};
  const auto pot = alloy_potential(m.field, m.profile, m.interaction, 1, 1);
  for (auto _ : state) {
    auto op = FiniteVolumeOperator::assemble(box, m.mesh, pot);
    benchmark::DoNotOptimize(op);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssembleSingle)->Arg(23)->Arg(111)->Arg(500)->Complexity();

static void BM_AssemblePair(benchmark::State& state) {
  const ModelConfig m = bench_model(2);
  const LatticeBox box{Point{0, 0}, static_cast<int>(state.range(0)), 1, 2};
  const auto pot = alloy_potential(m.field, m.profile, m.interaction, 1, 2);
  for (auto _ : state) {
    auto op = FiniteVolumeOperator::assemble(box, m.mesh, pot);
    benchmark::DoNotOptimize(op);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AssemblePair)->Arg(8)->Arg(23)->Arg(64)->Complexity();

BENCHMARK_MAIN();
