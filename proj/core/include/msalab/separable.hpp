#pragma once

#include "msalab/geometry.hpp"
#include "msalab/operator.hpp"

namespace msalab {

// Green block of a non-interactive two-particle box computed from the factor
// eigensystems instead of a product-space solve. Modes of one factor with
// eigenvalue above energy + mode_cutoff are dropped; their contribution is
// covered by tail_bound, so value + tail_bound is a certified upper bound on
// the true block norm (and value alone is exact when nothing is dropped).
struct SeparableGreenResult {
  double value = 0.0;
  double tail_bound = 0.0;
  int retained = 0;
  int total_modes = 0;
  int side = 1;  // which factor supplied the expansion modes
};

// source and target are configuration-space points, the first factor's
// coordinates followed by the second's. The expansion runs along whichever
// factor retains fewer modes. Throws NearSingularError when a denominator or
// a tail distance falls below ~1e-12.
SeparableGreenResult separable_green_norm(const FiniteVolumeOperator& factor1,
                                          const FiniteVolumeOperator& factor2, double energy,
                                          const Point& source, const Point& target,
                                          double mode_cutoff);

}  // namespace msalab
