#pragma once

#include <functional>
#include <map>
#include <vector>

#include "msalab/clusters.hpp"
#include "msalab/geometry.hpp"
#include "msalab/lab.hpp"
#include "msalab/rng.hpp"

namespace msalab {

// One instance of the geometric resolvent inequality: the Green norm between
// center cells of the enclosing box is compared against the chained sum over
// the inner box's out-layer. ratio = lhs / rhs; the geometric constant is
// calibrated as the max ratio over many samples and then held out against
// fresh ones.
struct ResolventChainSample {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  int boundary_terms = 0;
};

// Requires the inner box to sit inside the enclosing one with a margin of at
// least 3 on every axis, and target to be a cell of the enclosing box outside
// the inner one. Throws NearSingularError when either resolvent is untrusted.
ResolventChainSample resolvent_chain_sample(RealizationLab& lab, const LatticeBox& inner_box,
                                            const LatticeBox& big_box, const Point& target,
                                            double energy);

struct SubharmonicViolation {
  Point x;
  double value = 0.0;
  double allowed = 0.0;
  bool on_singular = false;
};

struct SubharmonicReport {
  bool ok = true;
  int checked = 0;
  int exempt = 0;  // within l of the boundary, or an empty comparison shell
  std::vector<SubharmonicViolation> violations;
};

// Verifies the two-sided subharmonicity property of f on the box: off the
// singular area f(x) <= q * max of f on the sphere of radius 2l-1 around x;
// inside a cluster box f(x) <= q * max of f over the shell [rho, rho+2l-1],
// where rho = (steps to exit the cluster box) + l clamped to [l, A*l]. Points
// within l of the boundary are exempt. tolerance is relative slack for
// measured (floating-point) profiles; zero means exact comparison.
SubharmonicReport subharmonic_check(const std::function<double(const Point&)>& f,
                                    const LatticeBox& box, double q, int ell,
                                    const ClusterDecomposition& clusters, double scale_a,
                                    double tolerance = 0.0);

// f(x) = max over inner-boundary cells y of the Green block norm between x
// and y. This is the profile the radial descent bound controls at the center.
std::map<Point, double> boundary_green_profile(RealizationLab& lab, const LatticeBox& box,
                                               double energy);

// Random function that satisfies the subharmonic property by construction:
// boundary ring uniform in [0.5, 1], interior grown from zero by iterating
// f(x) <- r_x * q * (shell max) with site factors r_x in [0.3, 1] (a fraction
// of them exactly 1) until the float fixpoint is reached. Multiplying by a
// factor <= 1 never rounds upward, so the defining inequalities hold exactly.
std::map<Point, double> synthetic_subharmonic(const LatticeBox& box, double q, int ell,
                                              const ClusterDecomposition& clusters, double scale_a,
                                              rng::Stream& stream);

}  // namespace msalab
