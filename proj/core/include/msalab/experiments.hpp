#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "msalab/classify.hpp"
#include "msalab/config.hpp"
#include "msalab/geometry.hpp"
#include "msalab/msa.hpp"

namespace msalab {

// A pair of two-particle boxes at the current scale. Geometry is drawn from a
// deterministic round-robin of admissible placements (variant index), so the
// same trial index sees the same geometry regardless of disorder seed; the
// separation always exceeds 8L, which covers both the distant-pair hypothesis
// and the independence requirement.
struct PairGeometry {
  LatticeBox first;
  LatticeBox second;
  bool first_interactive = false;
  bool second_interactive = false;
};

PairGeometry pair_geometry(PairCategory cat, int scale, int dim_per_particle,
                           double interaction_range, int variant);

// Per-trial event flags. s/t/r are the pair events at one scale: s = some
// grid energy leaves both boxes singular, t = a box tunnels (which box and at
// which mass depends on the category), r = some grid energy leaves both boxes
// resonant. The audit fields implement the mixed-pair consistency check: when
// s holds without t or r, the interactive box must be the non-resonant one at
// the witness energy.
struct TrialOutcome {
  bool s = false;
  bool t = false;
  bool r = false;
  double witness_energy_s = 0.0;  // meaningful iff s
  double witness_energy_r = 0.0;  // meaningful iff r
  bool audit_applicable = false;
  bool audit_consistent = true;
  bool near_singular_seen = false;
};

struct EventTallies {
  int trials = 0;
  int count_s = 0;
  int count_t = 0;
  int count_r = 0;
  int count_s_not_t = 0;
  int audit_checked = 0;
  int audit_violations = 0;
};

void add_outcome(EventTallies& tallies, const TrialOutcome& outcome);

// Deterministic worker pool: evaluates trial indices 0..trials-1 on up to
// `workers` threads and returns results in index order, so any worker count
// produces identical output. eval must be safe to call concurrently for
// distinct indices.
std::vector<TrialOutcome> run_trials(int trials, int workers,
                                     const std::function<TrialOutcome(int)>& eval);

// Upper edge of the test energy interval: half the median ground-state energy
// over calibration realizations of the origin box at the initial scale. The
// certified spectral cutoff sits one unit above the edge so every window
// distance the classifiers need is decided.
struct CalibratedInterval {
  double lo = 0.0;
  double hi = 0.0;
  double median_lambda_min = 0.0;
  double cutoff = 0.0;
  int realizations = 0;
};

CalibratedInterval calibrate_interval(const LabConfig& cfg, int realizations = 50);

TrialOutcome evaluate_pair_trial(const LabConfig& cfg, PairCategory cat, int k,
                                 const ScaleSchedule& sched, const EnergyGrid& grid,
                                 double cutoff, int trial_index);

struct TrialRecord {
  int index = 0;
  std::uint64_t seed = 0;
  TrialOutcome outcome;
};

struct PairEstimate {
  PairCategory category = PairCategory::NonInteractive;
  int k = 0;
  int scale = 0;
  double mass = 0.0;
  EventTallies tallies;
  std::vector<TrialRecord> records;
};

PairEstimate mc_pair_estimate(const LabConfig& cfg, PairCategory cat, int k,
                              const ScaleSchedule& sched, const EnergyGrid& grid, double cutoff);

// Wilson-interval comparison of the singular-pair frequency against the
// scale's target L^(-2p). A target smaller than what zero successes can
// certify at this trial count is reported "insufficient trials", never
// "pass".
struct BoundReport {
  double p_hat_s = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
  double target = 0.0;
  bool resolvable = false;
  std::string verdict;  // pass | fail | inconclusive | insufficient trials
  double p_hat_t = 0.0;
  double p_hat_r = 0.0;
  double p_hat_s_not_t = 0.0;
  bool decomposition_ok = true;  // count_s <= count_t + count_s_not_t
};

BoundReport bound_check(const EventTallies& tallies, int scale, double p);

// Frequency of a single origin box at the initial scale being singular at
// some grid energy; the induction-base estimate.
double initial_scale_estimate(const LabConfig& cfg, const EnergyGrid& grid, double cutoff,
                              int trials);

// Exponential-decay fits for low eigenfunctions: log cell mass against the
// max-norm distance from the peak cell, over cells above the 1e-12 floor.
// Fits with fewer than three distinct radii are flagged insufficient.
struct EigenDecayRow {
  std::uint64_t seed = 0;
  double energy = 0.0;
  double m_hat = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  Point peak_cell;
  int cells_fit = 0;
  bool sufficient = false;
  // (distance from peak, log cell mass), one entry per cell above the noise
  // floor; raw material for the decay-profile plot table.
  std::vector<std::pair<int, double>> profile;
};

std::vector<EigenDecayRow> eigen_decay_experiment(const LabConfig& cfg, double energy_lo,
                                                  double energy_hi);

// Full sweep: calibrate the interval, then every configured category at every
// scheduled scale.
struct MsaRunResult {
  ScaleSchedule schedule;
  CalibratedInterval interval;
  EnergyGrid grid;
  double initial_estimate = 0.0;
  std::vector<PairEstimate> estimates;
  std::vector<BoundReport> reports;
};

MsaRunResult run_msa(const LabConfig& cfg);

}  // namespace msalab
