#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <map>
#include <vector>

#include "msalab/operator.hpp"
#include "msalab/spectral.hpp"

namespace msalab {

struct NearSingularError : SolverError {
  using SolverError::SolverError;
};

// Resolvent block norms R(w, v; E) = ||1_{C(w)} (H - E)^{-1} 1_{C(v)}||: the
// largest singular value of the sub-block linking the unit cells around two
// lattice points. Solves against the cell-column basis; no dense inversion.
class GreenSolver {
 public:
  // Factorizes H - E. Throws NearSingularError when E sits within roughly
  // 1e-12 of the spectrum (detected by an inverse-power norm estimate).
  GreenSolver(const FiniteVolumeOperator& op, double energy);

  double energy() const { return energy_; }
  // estimate of ||(H-E)^{-1}||, i.e. 1/dist(E, spectrum)
  double inverse_norm_estimate() const { return inv_norm_; }

  // columns of (H-E)^{-1} spanned by the unit cell at v, iteratively refined
  const Eigen::MatrixXd& cell_columns(const Point& v);

  // R(w, v; E) against the cached columns of the source cell v
  double block_norm(const Point& w, const Point& v);

  // R(w, v; E) for every target in the list, one solve for the source cell
  std::vector<double> norms_against(const std::vector<Point>& targets, const Point& v);

 private:
  const FiniteVolumeOperator& op_;
  double energy_;
  Eigen::SparseMatrix<double> shifted_;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu_;
  double inv_norm_ = 0.0;
  std::map<Point, Eigen::MatrixXd> columns_;
  std::map<Point, std::vector<int>> cell_cache_;

  const std::vector<int>& cell(const Point& v);
};

// Largest singular value of a dense matrix block (tiny blocks; exact SVD).
double spectral_norm(const Eigen::MatrixXd& block);

// Brute-force oracle path: dense inversion of H - E, guarded to small sizes.
// Kept for cross-checks behind explicit oracle flags.
std::vector<double> dense_cell_norms(const FiniteVolumeOperator& op, double energy,
                                     const std::vector<Point>& targets, const Point& source,
                                     int size_limit = 400);

// Cell mass profile of a grid eigenvector: sqrt(h^dim * sum_{p in C(v)} psi_p^2)
// for every lattice point v of the box, in lattice_points() order.
std::vector<double> cell_norm_profile(const FiniteVolumeOperator& op,
                                      const Eigen::VectorXd& psi);

}  // namespace msalab
