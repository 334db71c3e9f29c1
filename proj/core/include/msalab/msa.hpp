#pragma once

#include <vector>

namespace msalab {

// Knobs of the multi-scale analysis. beta is frozen at 1/2: the resonance
// threshold exp(-l^beta) is part of the method, not a tunable.
struct MsaParameters {
  double alpha = 1.5;            // sub-scale exponent, must lie in (1,2)
  double mass = 1.0;             // decay rate parameter m >= 0
  double c_geom = 1.0;           // resolvent-chaining constant, measured
  int cluster_budget = 2;        // max tolerated count of disjoint singular sub-boxes
  double neighborhood_scale = 4.0;  // A: cap rho(x) <= A*l in the on-cluster descent step
  bool exhaustive_subcubes = false;  // enumerate every sub-box instead of the decimated set
  static constexpr double beta = 0.5;
};

void validate(const MsaParameters& p);  // throws std::invalid_argument

// gamma(m, L) = m * L * (1 + L^{-1/4}), evaluated as m * (L + L^{3/4}) so the
// quartic cases (L = 16, 81, ...) come out exact in double arithmetic.
double decay_exponent(double mass, double scale);

// Smallest admissible sub-box radius of an L-box: ceil(L^{1/alpha}).
int min_subscale(int radius, double alpha);

// A sub-box of radius l is resonant at E when dist(E, spectrum) drops below
// exp(-sqrt(l)); an L-box is singular when some out-layer Green norm exceeds
// exp(-gamma(m, L)).
double resonance_threshold(int subscale);
double singularity_threshold(double mass, int radius);

// Contraction coefficient of one radial-descent step at sub-scale l:
//   q = exp(-gamma(m, l)) * exp(sqrt(l)) * C' * (n*l)^{dim-1}
// with dim the ambient lattice dimension and C' the measured chaining constant.
double q_coefficient(double mass, int subscale, int cluster_budget, int dim, double c_prime);

// Rate bookkeeping for passing from scale L to L_next with the shrunken mass
// m' = m * (1 - L^{-1/2}): the per-unit-length rate gamma(m, L)/L, multiplied
// by the shrink factor, should still exceed the rate gamma(m, L_next)/L_next
// demanded at the next scale. Holds for large L, fails for small L, and fails
// (strictness) at m = 0.
struct MassRescalingReport {
  bool holds = false;
  double rescaled_rate = 0.0;   // m * (1 + L^{-1/4}) * (1 - L^{-1/2})
  double required_rate = 0.0;   // m * (1 + L_next^{-1/4})
  // the shrink product expands to 1 + L^{-1/4} - L^{-1/2} - L^{-3/4};
  // expansion_alt swaps the last exponent for -1/8 (a misprint of this
  // expansion that circulates) so reports can show how far off it is
  double expansion = 0.0;
  double expansion_alt = 0.0;
};

MassRescalingReport mass_rescaling_check(double mass, int scale, int next_scale);

// Decay bound delivered by iterating the descent step across the box: the
// center value of a subharmonic function obeys
//   f(center) <= q^{(L - W - 3l)/l} * max f.
// When the exponent is not positive the box is too small for any descent and
// the trivial bound max_f is returned with the degenerate flag set.
struct DescentBound {
  double bound = 0.0;
  double exponent = 0.0;
  bool degenerate = false;
};

DescentBound radial_descent_bound(double q, int radius, int cover_width, int subscale,
                                  double max_f);

// Scale ladder L_{k+1} = ceil(L_k^alpha) and mass ladder
// m_{k+1} = m_k * (1 - L_k^{-1/2}).
struct ScaleSchedule {
  int l0 = 8;
  double alpha = 1.5;
  double m0 = 1.0;
  std::vector<int> scales;     // L_0 .. L_kmax
  std::vector<double> masses;  // m_0 .. m_kmax
  bool truncated = false;      // ladder stopped early at the feasibility cap
};

ScaleSchedule scale_schedule(int l0, double alpha, double m0, int k_max,
                             int feasibility_cap = 100000);

// ceil(l^alpha) with a one-ulp-scale nudge so exact powers (4^{3/2} = 8) do
// not round up to 9.
int next_scale(int radius, double alpha);

}  // namespace msalab
