#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>

#include "msalab/disorder.hpp"
#include "msalab/green.hpp"
#include "msalab/operator.hpp"
#include "msalab/spectral.hpp"

namespace msalab {

// One disordered model: lattice dimensions, mesh, and the seeded potential
// ingredients. Everything a realization needs apart from box geometry.
struct ModelConfig {
  int dim_per_particle = 1;
  int particles = 2;
  Mesh mesh;
  AmplitudeField field{AmplitudeLaw::Uniform, 1.0, 1.0, 0};
  BumpProfile profile;
  InteractionPotential interaction{InteractionKind::Step, 0.0, 1.0};
};

void validate(const ModelConfig& cfg);

ModelConfig with_seed(ModelConfig cfg, std::uint64_t seed);

// Classification workhorse for a single disorder realization: hands out
// assembled operators, spectra below a fixed cutoff, and Green solvers, each
// cached by box (and energy). One lab per trial; not thread-safe, by design
// confined to the task that owns the trial.
class RealizationLab {
 public:
  RealizationLab(ModelConfig cfg, double spectral_cutoff,
                 SpectralOptions opts = SpectralOptions{});

  const ModelConfig& config() const { return cfg_; }
  double spectral_cutoff() const { return cutoff_; }

  // Operator on the box; box.particles may be the configured count or 1
  // (single-particle factor of a two-particle box, no interaction term).
  const FiniteVolumeOperator& op(const LatticeBox& box);

  // Eigenvalues below the cutoff, count-certified.
  const SpectrumWindow& window(const LatticeBox& box);

  // Factorized resolvent at E; throws NearSingularError (cached, so repeated
  // queries on a bad (box, E) stay cheap).
  GreenSolver& green(const LatticeBox& box, double energy);

 private:
  ModelConfig cfg_;
  double cutoff_;
  SpectralOptions opts_;
  std::map<std::string, FiniteVolumeOperator> ops_;
  std::map<std::string, SpectrumWindow> windows_;
  std::map<std::pair<std::string, std::uint64_t>, std::unique_ptr<GreenSolver>> greens_;
  std::set<std::pair<std::string, std::uint64_t>> near_singular_;
};

}  // namespace msalab
