#include "msalab/lab.hpp"

#include <bit>
#include <stdexcept>

namespace msalab {

void validate(const ModelConfig& cfg) {
  if (cfg.dim_per_particle < 1) throw std::invalid_argument("model: dimension must be >= 1");
  if (cfg.particles != 1 && cfg.particles != 2)
    throw std::invalid_argument("model: particle count must be 1 or 2");
  validate(cfg.mesh);
  validate(cfg.field);
  validate(cfg.interaction);
}

ModelConfig with_seed(ModelConfig cfg, std::uint64_t seed) {
  cfg.field.seed = seed;
  return cfg;
}

RealizationLab::RealizationLab(ModelConfig cfg, double spectral_cutoff, SpectralOptions opts)
    : cfg_(std::move(cfg)), cutoff_(spectral_cutoff), opts_(opts) {
  validate(cfg_);
}

const FiniteVolumeOperator& RealizationLab::op(const LatticeBox& box) {
  if (box.dim_per_particle != cfg_.dim_per_particle)
    throw std::invalid_argument("lab: box dimension does not match the model");
  if (box.particles != cfg_.particles && box.particles != 1)
    throw std::invalid_argument("lab: box particle count does not match the model");
  auto it = ops_.find(box.key());
  if (it != ops_.end()) return it->second;
  auto potential = alloy_potential(cfg_.field, cfg_.profile, cfg_.interaction,
                                   cfg_.dim_per_particle, box.particles);
  return ops_.emplace(box.key(), FiniteVolumeOperator::assemble(box, cfg_.mesh, potential))
      .first->second;
}

const SpectrumWindow& RealizationLab::window(const LatticeBox& box) {
  auto it = windows_.find(box.key());
  if (it != windows_.end()) return it->second;
  return windows_.emplace(box.key(), spectrum_window(op(box), cutoff_, false, opts_))
      .first->second;
}

GreenSolver& RealizationLab::green(const LatticeBox& box, double energy) {
  const auto key = std::make_pair(box.key(), std::bit_cast<std::uint64_t>(energy));
  if (near_singular_.count(key))
    throw NearSingularError("lab: energy within ~1e-12 of the spectrum");
  auto it = greens_.find(key);
  if (it != greens_.end()) return *it->second;
  try {
    auto solver = std::make_unique<GreenSolver>(op(box), energy);
    return *greens_.emplace(key, std::move(solver)).first->second;
  } catch (const NearSingularError&) {
    near_singular_.insert(key);
    throw;
  }
}

}  // namespace msalab
