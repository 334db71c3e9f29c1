#include <benchmark/benchmark.h>

#include "msalab/green.hpp"
#include "msalab/lab.hpp"

using namespace msalab;

namespace {

ModelConfig bench_model(int particles) {
  ModelConfig m;
  m.dim_per_particle = 1;
  m.particles = particles;
  m.field = AmplitudeField{AmplitudeLaw::Uniform, 10.0, 1.0, 777};
  m.interaction = InteractionPotential{InteractionKind::Step, 0.5, 1.0};
  return m;
}

}  // namespace

// one factored solve plus the out-layer norms, the classification kernel
static void BM_OutLayerNorms(benchmark::State& state) {
  const ModelConfig m = bench_model(2);
  const LatticeBox box{Point{0, 0}, static_cast<int>(state.range(0)), 1, 2};
  const auto pot = alloy_potential(m.field, m.profile, m.interaction, 1, 2);
  const auto op = FiniteVolumeOperator::assemble(box, m.mesh, pot);
  const std::vector<Point> rim = out_layer(box);
  for (auto _ : state) {
    GreenSolver solver(op, -0.5);
    auto norms = solver.norms_against(rim, box.center);
    benchmark::DoNotOptimize(norms);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_OutLayerNorms)->Arg(8)->Arg(16)->Arg(23)->Complexity();

// repeated sources against one cached factorization
static void BM_BlockNormReuse(benchmark::State& state) {
  const ModelConfig m = bench_model(2);
  const LatticeBox box{Point{0, 0}, 16, 1, 2};
  const auto pot = alloy_potential(m.field, m.profile, m.interaction, 1, 2);
  const auto op = FiniteVolumeOperator::assemble(box, m.mesh, pot);
  GreenSolver solver(op, -0.5);
  const std::vector<Point> rim = out_layer(box);
  std::size_t i = 0;
  for (auto _ : state) {
    const double v = solver.block_norm(rim[i % rim.size()], box.center);
    benchmark::DoNotOptimize(v);
    ++i;
  }
}
BENCHMARK(BM_BlockNormReuse);

BENCHMARK_MAIN();
