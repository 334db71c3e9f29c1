#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "msalab/geometry.hpp"

namespace msalab {

// Alloy-type random potential V(x) = sum_s V_s * phi(x - s) over lattice
// sites s, with nonnegative single-site bump phi and i.i.d. amplitudes V_s.

enum class BumpKind { Tent, Plateau };

struct BumpProfile {
  BumpKind kind = BumpKind::Tent;
  double radius = 1.0;  // support radius R
  double scale = 1.0;   // overall amplitude, 1 keeps the tent a partition of unity

  // phi(y) for a displacement y in R^d. Tent: scale * prod_i max(0, 1 - |y_i|/R),
  // partition of unity at R = 1, scale = 1. Plateau: scale * indicator of ||y|| <= R.
  double value(const std::vector<double>& y) const;
};

enum class AmplitudeLaw { Uniform, Hoelder };

// Site amplitudes V_s. Each value is a pure function of (seed, s): disjoint
// site sets automatically carry independent samples and a region evaluates
// identically no matter which box asked for it.
struct AmplitudeField {
  AmplitudeLaw law = AmplitudeLaw::Uniform;
  double bound = 1.0;     // M, amplitudes live in [0, M]
  double exponent = 1.0;  // b in (0, 1]; the law M * U^(1/b) has modulus of
                          // continuity <= eps^b for M >= 1, and b = 1 is uniform
  std::uint64_t seed = 0;

  double value(const Point& site) const;
};

void validate(const AmplitudeField& field);

using SiteAmplitudeFn = std::function<double(const Point&)>;

// V(x) for a single-particle position x (per-axis real coordinates). Sums the
// bumps of every lattice site within the support radius.
double potential_value(const SiteAmplitudeFn& amplitudes, const BumpProfile& profile,
                       const std::vector<double>& x);
double potential_value(const AmplitudeField& field, const BumpProfile& profile,
                       const std::vector<double>& x);

// V(x1) + V(x2) for a two-particle configuration point (d coords each).
double two_particle_potential(const AmplitudeField& field, const BumpProfile& profile,
                              const std::vector<double>& x12, int dim_per_particle);

struct CoveringReport {
  bool covered = false;
  double min_value = 0.0;   // min over the sampled window of sum_s phi(x - s)
  double worst_x = 0.0;     // first axis coordinate of the minimizing sample
};

// Checks the covering condition sum_s phi(x - s) >= 1 on a dense deterministic
// sample of the window [-L, L]^d, with sites drawn from [-L-ceil(R), L+ceil(R)]^d.
// Tolerance 1e-12 absorbs roundoff in the tent partition of unity.
CoveringReport covering_check(const BumpProfile& profile, int dim, int window_radius,
                              int samples_per_unit = 8);

enum class InteractionKind { Step, Tent };

// Two-body potential U(x1, x2) depending on the particle distance.
struct InteractionPotential {
  InteractionKind kind = InteractionKind::Step;
  double strength = 0.0;  // c >= 0
  double range = 1.0;     // r0 >= 0

  // max-norm distance between the particle positions
  double value(const std::vector<double>& x1, const std::vector<double>& x2) const;
};

void validate(const InteractionPotential& u);

}  // namespace msalab
