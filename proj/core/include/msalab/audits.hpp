#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msalab/classify.hpp"
#include "msalab/config.hpp"
#include "msalab/descent.hpp"

namespace msalab {

// Measurement of the geometric constant in the resolvent chain bound: the max
// lhs/rhs ratio over randomized (realization, placement, energy) samples.
// Samples the solver refuses are skipped and replaced, never silently kept.
struct ChainCalibration {
  double c_geom = 0.0;
  std::vector<double> ratios;
  int samples = 0;
  int skipped_near_singular = 0;
};

ChainCalibration calibrate_cgeom(const LabConfig& cfg, int samples, std::uint64_t salt,
                                 int inner_radius = 4, int outer_radius = 12);

// Fresh samples checked against a previously calibrated constant.
struct ChainHoldout {
  int samples = 0;
  int violations = 0;
  double worst_ratio = 0.0;
  double c_geom = 0.0;
};

ChainHoldout holdout_cgeom(const LabConfig& cfg, double c_geom, int samples, std::uint64_t salt,
                           int inner_radius = 4, int outer_radius = 12);

// Live radial-descent audit: per seed, one energy from the interval; when the
// box is non-resonant (exhaustive gate) and its singular clusters fit the
// budget, the measured center profile must obey the descent bound with q
// assembled from the configured geometric constant.
struct DescentAuditCase {
  std::uint64_t seed = 0;
  double energy = 0.0;
  bool skipped_resonant = false;
  bool skipped_degenerate = false;
  bool exponent_degenerate = false;  // cover too wide for a nontrivial bound
  double q = 0.0;
  double cover_width = 0.0;
  double f_center = 0.0;
  double bound = 0.0;
  bool violated = false;
};

struct DescentAudit {
  int cases = 0;
  int checked = 0;
  int skipped = 0;
  int violations = 0;
  std::vector<DescentAuditCase> details;
};

DescentAudit radial_descent_audit(const LabConfig& cfg, int seeds, int radius, int ell,
                                  double energy_lo, double energy_hi);

// The decoupling implication for non-interactive boxes: non-resonant (checked
// exhaustively) and non-tunneling forces non-singular. Counterexamples are
// first-class findings, reproducible from (seed, energy).
enum class DecouplingVerdict { Holds, Counterexample, SkippedResonant, SkippedTunneling };

struct DecouplingCase {
  std::uint64_t seed = 0;
  double energy = 0.0;
  DecouplingVerdict verdict = DecouplingVerdict::Holds;
  double witness_norm = 0.0;
  double threshold = 0.0;
};

struct DecouplingAudit {
  int cases = 0;
  int holds = 0;
  int counterexamples = 0;
  int skipped_resonant = 0;
  int skipped_tunneling = 0;
  std::vector<DecouplingCase> details;
};

DecouplingAudit decoupling_audit(const LabConfig& cfg, int seeds, int radius, double energy_lo,
                                 double energy_hi, int energy_points);

// Fast self-contained property suite for the check subcommand: micro-formula
// values, schedule arithmetic, covering condition, config round-trip, a
// synthetic descent case, and a small separable-vs-dense cross-check.
struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_check_suite(const LabConfig& cfg);

}  // namespace msalab
