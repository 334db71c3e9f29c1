#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

#include "msalab/operator.hpp"

namespace msalab {

struct SpectralOptions {
  int dense_cutoff = 1200;     // problems up to this size use the dense solver
  double residual_tol = 1e-8;  // relative to operator norm bound
  int max_lanczos_dim = 500;
  int deflation_rounds = 4;
};

// All eigenvalues strictly below `cutoff`, sorted. The count is certified
// against the LDLT inertia of H - cutoff*I, so distance-to-spectrum queries
// for energies below the cutoff are decisive: eigenvalues at or above the
// cutoff can only contribute distances >= cutoff - E.
struct SpectrumWindow {
  double cutoff = 0.0;
  std::vector<double> values;
  Eigen::MatrixXd vectors;  // columns, only when requested
  bool vectors_available = false;
  int certified_count = 0;  // inertia of H - cutoff*I
  bool certified = false;   // found values match the certified count

  // Lower bound on dist(E, spectrum); exact whenever the nearest eigenvalue
  // lies inside the window. Requires E < cutoff.
  double dist(double energy) const;
};

SpectrumWindow spectrum_window(const FiniteVolumeOperator& op, double cutoff,
                               bool want_vectors, const SpectralOptions& opts);

// Number of eigenvalues strictly below c (LDLT inertia, with a tiny shift
// retry when the factorization hits a degenerate pivot).
int eigenvalue_count_below(const FiniteVolumeOperator& op, double c);

// k smallest eigenvalues (and vectors if requested), residual-checked.
struct SmallestEigs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
  bool vectors_available = false;
};
SmallestEigs smallest_eigenvalues(const FiniteVolumeOperator& op, int k, bool want_vectors,
                                  const SpectralOptions& opts = SpectralOptions{});

// Full dense eigendecomposition; guarded to small problems.
struct DenseEigs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
};
DenseEigs dense_eigensystem(const FiniteVolumeOperator& op, int size_limit = 2500);

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace msalab
