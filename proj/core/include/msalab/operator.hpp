#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <iosfwd>
#include <vector>

#include "msalab/disorder.hpp"
#include "msalab/geometry.hpp"

namespace msalab {

// Finite-volume Hamiltonians: second-order central differences for the
// kinetic part with Dirichlet conditions outside the box, plus the random
// potential and (for two particles) the interaction.

enum class MeshMode { TightBinding, ContinuumFD };

struct Mesh {
  MeshMode mode = MeshMode::TightBinding;
  double spacing = 1.0;  // h; tight-binding fixes h = 1

  // Number of grid points per axis for a box of the given radius.
  // Tight-binding keeps one point per lattice site (2L+1); the continuum
  // grid keeps the strict interior u + h*k, |h*k| < L (2L/h - 1 points).
  int points_per_axis(int radius) const;
  double axis_offset(int radius, int j) const;  // offset of grid index j from the center
};

// Throws std::invalid_argument unless h is admissible: 2/h must be an even
// positive integer so cell boundaries fall on grid points.
void validate(const Mesh& mesh);

using PotentialFn = std::function<double(const std::vector<double>&)>;

class FiniteVolumeOperator {
 public:
  // potential receives the real-space configuration coordinates of a grid point
  static FiniteVolumeOperator assemble(const LatticeBox& box, const Mesh& mesh,
                                       const PotentialFn& potential);

  const LatticeBox& box() const { return box_; }
  const Mesh& mesh() const { return mesh_; }
  int size() const { return static_cast<int>(matrix_.rows()); }
  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  const std::vector<double>& potential() const { return potential_; }

  double quadrature_weight() const;  // h^dim, the L2 weight per grid point
  double norm_bound() const { return norm_bound_; }  // Gershgorin row bound

  std::vector<double> grid_coords(int idx) const;
  // grid indices of the unit cell around lattice point v (clipped to the box)
  std::vector<int> cell_indices(const Point& v) const;

  // H - energy * I with the same sparsity pattern
  Eigen::SparseMatrix<double> shifted(double energy) const;

  // coordinate-format dump: "row col value", 1-based, 17 significant digits
  void dump_coordinate(std::ostream& os) const;

 private:
  LatticeBox box_{Point{0}, 1, 1, 1};
  Mesh mesh_;
  Eigen::SparseMatrix<double> matrix_;
  std::vector<double> potential_;
  double norm_bound_ = 0.0;
  int per_axis_ = 0;
};

// Alloy potential hook-up: V summed per particle, plus the two-body term for
// two-particle boxes.
PotentialFn alloy_potential(const AmplitudeField& field, const BumpProfile& profile,
                            const InteractionPotential& interaction, int dim_per_particle,
                            int particles);

}  // namespace msalab
