#include <benchmark/benchmark.h>

#include "msalab/classify.hpp"
#include "msalab/lab.hpp"
#include "msalab/msa.hpp"

using namespace msalab;

namespace {

ModelConfig bench_model() {
  ModelConfig m;
  m.dim_per_particle = 1;
  m.particles = 2;
  m.field = AmplitudeField{AmplitudeLaw::Uniform, 10.0, 1.0, 90210};
  m.interaction = InteractionPotential{InteractionKind::Step, 0.5, 1.0};
  return m;
}

}  // namespace

// out-layer Green scan of one box at one energy, fresh realization each round
static void BM_ClassifySingular(benchmark::State& state) {
  const ModelConfig m = bench_model();
  const int radius = static_cast<int>(state.range(0));
  const LatticeBox box{Point{0, 0}, radius, 1, 2};
  std::uint64_t seed = 1;
  for (auto _ : state) {
    RealizationLab lab(with_seed(m, seed++), 2.5);
    benchmark::DoNotOptimize(classify_singular(lab, box, 0.7, 0.3));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassifySingular)->Arg(8)->Arg(16)->Arg(23)->Complexity();

// decimated sub-box resonance scan, the per-energy cost of a trial
static void BM_ClassifyResonant(benchmark::State& state) {
  const ModelConfig m = bench_model();
  const int radius = static_cast<int>(state.range(0));
  const LatticeBox box{Point{0, 0}, radius, 1, 2};
  MsaParameters params;
  params.mass = 0.3;
  std::uint64_t seed = 1;
  for (auto _ : state) {
    RealizationLab lab(with_seed(m, seed++), 2.5);
    benchmark::DoNotOptimize(classify_resonant(lab, box, 0.7, params));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassifyResonant)->Arg(8)->Arg(16)->Arg(23)->Complexity();

// full tunneling decision for a pair box via its one-dimensional factors
static void BM_ClassifyTunneling(benchmark::State& state) {
  const ModelConfig m = bench_model();
  const int radius = static_cast<int>(state.range(0));
  const LatticeBox box{Point{0, 20 * radius}, radius, 1, 2};
  const int ell = min_subscale(radius, 1.5);
  std::uint64_t seed = 1;
  const EnergyGrid grid = make_energy_grid(0.0, 1.2, 5);
  for (auto _ : state) {
    RealizationLab lab(with_seed(m, seed++), 2.5);
    benchmark::DoNotOptimize(classify_tunneling(lab, box, grid, 0.3, ell));
  }
}
// radius 8 is omitted: at l = 4 two disjoint sub-boxes cannot fit, so the
// classifier returns vacuously without scanning
BENCHMARK(BM_ClassifyTunneling)->Arg(16)->Arg(23);

BENCHMARK_MAIN();
