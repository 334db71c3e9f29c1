#pragma once

#include <vector>

#include "msalab/geometry.hpp"
#include "msalab/lab.hpp"
#include "msalab/msa.hpp"

namespace msalab {

// Finite energy grid standing in for "there exists E in [lo, hi]": the
// continuum quantifier is undecidable numerically, so every existential
// verdict carries the spacing it was sampled at.
struct EnergyGrid {
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  std::vector<double> values() const;
  double spacing() const;
};

EnergyGrid make_energy_grid(double lo, double hi, int points);

// Sub-boxes B_l(v) of box with l in [ceil(L^{1/alpha}), L]. The default set is
// decimated (l doubling from the minimum plus the full box; centers on a
// stride-ceil(l/2) sub-lattice anchored at the center) so classification runs
// in sub-quadratic time; the exhaustive set is for oracle cross-checks.
std::vector<LatticeBox> enumerate_subboxes(const LatticeBox& box, double alpha,
                                           bool exhaustive);

// Resonance: some sub-box spectrum comes within exp(-sqrt(l)) of E. The
// witness is the attaining sub-box when resonant, else the one with the
// smallest margin above its threshold.
struct ResonanceResult {
  bool resonant = false;
  bool exhaustive = false;
  LatticeBox witness{Point{0}, 1, 1, 1};
  double witness_distance = 0.0;
  double witness_threshold = 0.0;
  int subboxes_checked = 0;
};

ResonanceResult classify_resonant(RealizationLab& lab, const LatticeBox& box, double energy,
                                  const MsaParameters& params);

// Singularity: the Green norm from the center cell to some out-layer cell
// exceeds exp(-gamma(m, L)). Energies the solver refuses (within ~1e-12 of
// the spectrum) are reported singular with the near_singular flag raised.
struct SingularityResult {
  bool singular = false;
  bool near_singular = false;
  double threshold = 0.0;
  double witness_norm = 0.0;
  Point witness_cell;
};

SingularityResult classify_singular(RealizationLab& lab, const LatticeBox& box, double energy,
                                    double mass);

// Tunneling: for some grid energy the box holds two disjoint singular
// sub-boxes of radius sub_radius. A two-particle box tunnels when either
// single-particle factor does.
struct TunnelingResult {
  bool tunneling = false;
  double witness_energy = 0.0;
  Point witness_a;
  Point witness_b;
  int energies_checked = 0;
  double grid_spacing = 0.0;
};

TunnelingResult classify_tunneling(RealizationLab& lab, const LatticeBox& box,
                                   const EnergyGrid& grid, double mass, int sub_radius);

}  // namespace msalab
