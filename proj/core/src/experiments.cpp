#include "msalab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <thread>

#include "msalab/green.hpp"
#include "msalab/rng.hpp"
#include "msalab/spectral.hpp"
#include "msalab/stats.hpp"

namespace msalab {

namespace {

std::uint64_t category_tag(PairCategory cat) {
  switch (cat) {
    case PairCategory::NonInteractive: return 1;
    case PairCategory::Interactive: return 2;
    case PairCategory::Mixed: return 3;
  }
  throw std::logic_error("category_tag: unknown category");
}

// Particle-pair center (p1, p2) with both particles offset along the first
// axis: p1 = shift * e1, p2 = (shift + gap) * e1.
Point pair_center(int dim_per_particle, int shift, int gap) {
  Point c(static_cast<std::size_t>(2 * dim_per_particle), 0);
  c[0] = shift;
  c[static_cast<std::size_t>(dim_per_particle)] = shift + gap;
  return c;
}

}  // namespace

PairGeometry pair_geometry(PairCategory cat, int scale, int dim_per_particle,
                           double interaction_range, int variant) {
  if (scale < 2) throw std::invalid_argument("pair_geometry: scale must be at least 2");
  if (variant < 0) throw std::invalid_argument("pair_geometry: variant must be nonnegative");
  const int r0 = static_cast<int>(std::ceil(interaction_range));

  // Particle gaps: interactive picks from a small cycle of admissible gaps,
  // non-interactive steps through gaps beyond the interaction reach.
  const auto interactive_gap = [&](int v) {
    const int cycle[4] = {1, 2, scale, 2 * scale};
    return cycle[v % 4];
  };
  const auto distant_gap = [&](int v) { return 2 * scale + r0 + 1 + (v % 3) * scale; };

  int gap1 = 0, gap2 = 0;
  switch (cat) {
    case PairCategory::NonInteractive:
      gap1 = distant_gap(variant);
      gap2 = distant_gap(variant + 1);
      break;
    case PairCategory::Interactive:
      gap1 = interactive_gap(variant);
      gap2 = interactive_gap(variant + 1);
      break;
    case PairCategory::Mixed:
      gap1 = interactive_gap(variant);
      gap2 = distant_gap(variant);
      break;
  }

  // Both boxes shifted apart so that box_distance > 8L and the particle
  // projections stay disjoint (independent disorder).
  const int shift = 10 * scale + r0 + 1 + std::max(gap1, gap2);

  PairGeometry g;
  g.first = LatticeBox{pair_center(dim_per_particle, 0, gap1), scale, dim_per_particle, 2};
  g.second = LatticeBox{pair_center(dim_per_particle, shift, gap2), scale, dim_per_particle, 2};
  g.first_interactive = is_interactive(g.first, interaction_range);
  g.second_interactive = is_interactive(g.second, interaction_range);

  const bool want_first = cat != PairCategory::NonInteractive;
  const bool want_second = cat == PairCategory::Interactive;
  if (g.first_interactive != want_first || g.second_interactive != want_second ||
      box_distance(g.first, g.second) <= 8 * scale || !projections_disjoint(g.first, g.second)) {
    throw std::logic_error("pair_geometry: constructed placement violates its own contract");
  }
  return g;
}

void add_outcome(EventTallies& tallies, const TrialOutcome& outcome) {
  ++tallies.trials;
  if (outcome.s) ++tallies.count_s;
  if (outcome.t) ++tallies.count_t;
  if (outcome.r) ++tallies.count_r;
  if (outcome.s && !outcome.t) ++tallies.count_s_not_t;
  if (outcome.audit_applicable) {
    ++tallies.audit_checked;
    if (!outcome.audit_consistent) ++tallies.audit_violations;
  }
}

std::vector<TrialOutcome> run_trials(int trials, int workers,
                                     const std::function<TrialOutcome(int)>& eval) {
  if (trials < 0) throw std::invalid_argument("run_trials: negative trial count");
  if (workers < 1) throw std::invalid_argument("run_trials: need at least one worker");

  std::vector<TrialOutcome> out(static_cast<std::size_t>(trials));
  if (trials == 0) return out;
  if (workers == 1) {
    for (int i = 0; i < trials; ++i) out[static_cast<std::size_t>(i)] = eval(i);
    return out;
  }

  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const int pool = std::min(workers, trials);
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(pool));
  for (int w = 0; w < pool; ++w) {
    threads.emplace_back([&]() {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= trials) return;
        try {
          out[static_cast<std::size_t>(i)] = eval(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

CalibratedInterval calibrate_interval(const LabConfig& cfg, int realizations) {
  if (realizations < 1) throw std::invalid_argument("calibrate_interval: need at least one realization");

  CalibratedInterval out;
  out.lo = cfg.experiment.energy_min;
  out.realizations = realizations;

  const int d = cfg.model.dim_per_particle;
  const LatticeBox box{Point(static_cast<std::size_t>(d * cfg.model.particles), 0),
                       cfg.schedule.l0, d, cfg.model.particles};

  std::vector<double> ground;
  ground.reserve(static_cast<std::size_t>(realizations));
  for (int r = 0; r < realizations; ++r) {
    const ModelConfig m =
        with_seed(cfg.model, rng::derive(cfg.run.seed, "e1star", static_cast<std::uint64_t>(r)));
    const auto op = FiniteVolumeOperator::assemble(
        box, m.mesh, alloy_potential(m.field, m.profile, m.interaction, d, m.particles));
    ground.push_back(smallest_eigenvalues(op, 1, false).values.front());
  }
  out.median_lambda_min = median(ground);

  out.hi = cfg.experiment.auto_energy_max ? std::max(out.lo, 0.5 * out.median_lambda_min)
                                          : cfg.experiment.energy_max;
  out.cutoff = out.hi + 1.0;
  return out;
}

TrialOutcome evaluate_pair_trial(const LabConfig& cfg, PairCategory cat, int k,
                                 const ScaleSchedule& sched, const EnergyGrid& grid,
                                 double cutoff, int trial_index) {
  if (k < 0 || k >= static_cast<int>(sched.scales.size())) {
    throw std::invalid_argument("evaluate_pair_trial: scale index outside the schedule");
  }
  const int scale = sched.scales[static_cast<std::size_t>(k)];
  const double mass = sched.masses[static_cast<std::size_t>(k)];
  const int sub_radius = k > 0 ? sched.scales[static_cast<std::size_t>(k - 1)]
                               : min_subscale(scale, sched.alpha);
  const double sub_mass = k > 0 ? sched.masses[static_cast<std::size_t>(k - 1)] : sched.m0;

  const std::uint64_t trial_seed = rng::combine(
      rng::derive(cfg.run.seed, "pair-trial", category_tag(cat), static_cast<std::uint64_t>(k)),
      static_cast<std::uint64_t>(trial_index));

  RealizationLab lab(with_seed(cfg.model, trial_seed), cutoff);
  const PairGeometry geom = pair_geometry(cat, scale, cfg.model.dim_per_particle,
                                          cfg.model.interaction.range, trial_index);

  TrialOutcome outcome;
  const std::vector<double> energies = grid.values();

  // Tunneling: category I tests both boxes at the previous mass; the mixed
  // category tests only the non-interactive box, at the initial mass; the
  // interactive pair estimate does not use the event.
  if (cat == PairCategory::NonInteractive) {
    outcome.t = classify_tunneling(lab, geom.first, grid, sub_mass, sub_radius).tunneling ||
                classify_tunneling(lab, geom.second, grid, sub_mass, sub_radius).tunneling;
  } else if (cat == PairCategory::Mixed) {
    outcome.t = classify_tunneling(lab, geom.second, grid, sched.m0, sub_radius).tunneling;
  }

  // Resonance flags per grid energy; window eigendata is cached per sub-box,
  // so the per-energy cost is a distance lookup.
  std::vector<char> res1, res2;
  res1.reserve(energies.size());
  res2.reserve(energies.size());
  std::size_t r_at = energies.size();
  for (std::size_t i = 0; i < energies.size(); ++i) {
    res1.push_back(classify_resonant(lab, geom.first, energies[i], cfg.msa.params).resonant);
    res2.push_back(classify_resonant(lab, geom.second, energies[i], cfg.msa.params).resonant);
    if (res1.back() && res2.back() && !outcome.r) {
      outcome.r = true;
      outcome.witness_energy_r = energies[i];
      r_at = i;
    }
  }

  // Singularity, first box first: a factorization at E happens for the second
  // box only at energies where the first is already singular.
  std::size_t s_at = energies.size();
  for (std::size_t i = 0; i < energies.size(); ++i) {
    const SingularityResult s1 = classify_singular(lab, geom.first, energies[i], mass);
    outcome.near_singular_seen |= s1.near_singular;
    if (!s1.singular) continue;
    const SingularityResult s2 = classify_singular(lab, geom.second, energies[i], mass);
    outcome.near_singular_seen |= s2.near_singular;
    if (s2.singular) {
      outcome.s = true;
      outcome.witness_energy_s = energies[i];
      s_at = i;
      break;
    }
  }

  // Mixed-pair consistency: inside S without T or R the interactive box must
  // be the non-resonant member at the witness energy.
  if (cat == PairCategory::Mixed && outcome.s && !outcome.t && !outcome.r) {
    outcome.audit_applicable = true;
    outcome.audit_consistent = !res1[s_at] && res2[s_at];
  }
  (void)r_at;
  return outcome;
}

PairEstimate mc_pair_estimate(const LabConfig& cfg, PairCategory cat, int k,
                              const ScaleSchedule& sched, const EnergyGrid& grid, double cutoff) {
  PairEstimate est;
  est.category = cat;
  est.k = k;
  est.scale = sched.scales.at(static_cast<std::size_t>(k));
  est.mass = sched.masses.at(static_cast<std::size_t>(k));

  const std::vector<TrialOutcome> outcomes =
      run_trials(cfg.experiment.trials, cfg.run.workers, [&](int i) {
        return evaluate_pair_trial(cfg, cat, k, sched, grid, cutoff, i);
      });

  est.records.reserve(outcomes.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    add_outcome(est.tallies, outcomes[i]);
    const std::uint64_t seed = rng::combine(
        rng::derive(cfg.run.seed, "pair-trial", category_tag(cat), static_cast<std::uint64_t>(k)),
        static_cast<std::uint64_t>(i));
    est.records.push_back(TrialRecord{static_cast<int>(i), seed, outcomes[i]});
  }
  return est;
}

BoundReport bound_check(const EventTallies& tallies, int scale, double p) {
  if (scale < 2) throw std::invalid_argument("bound_check: scale must be at least 2");

  BoundReport report;
  report.target = std::pow(static_cast<double>(scale), -2.0 * p);
  report.decomposition_ok = tallies.count_s <= tallies.count_t + tallies.count_s_not_t;

  if (tallies.trials == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    report.p_hat_s = report.ci_lo = report.ci_hi = nan;
    report.p_hat_t = report.p_hat_r = report.p_hat_s_not_t = nan;
    report.verdict = "insufficient trials";
    return report;
  }

  const WilsonInterval w = wilson_interval(tallies.count_s, tallies.trials);
  report.p_hat_s = w.p_hat;
  report.ci_lo = w.lo;
  report.ci_hi = w.hi;
  report.p_hat_t = static_cast<double>(tallies.count_t) / tallies.trials;
  report.p_hat_r = static_cast<double>(tallies.count_r) / tallies.trials;
  report.p_hat_s_not_t = static_cast<double>(tallies.count_s_not_t) / tallies.trials;

  // Resolvable means even a perfect zero tally could certify the target.
  report.resolvable = wilson_interval(0, tallies.trials).hi <= report.target;
  if (!report.resolvable) {
    report.verdict = "insufficient trials";
  } else if (w.hi <= report.target) {
    report.verdict = "pass";
  } else if (w.lo > report.target) {
    report.verdict = "fail";
  } else {
    report.verdict = "inconclusive";
  }
  return report;
}

double initial_scale_estimate(const LabConfig& cfg, const EnergyGrid& grid, double cutoff,
                              int trials) {
  if (trials < 1) throw std::invalid_argument("initial_scale_estimate: need at least one trial");

  const int d = cfg.model.dim_per_particle;
  const LatticeBox box{Point(static_cast<std::size_t>(d * cfg.model.particles), 0),
                       cfg.schedule.l0, d, cfg.model.particles};
  const double mass = cfg.msa.params.mass;

  const std::vector<TrialOutcome> outcomes = run_trials(trials, cfg.run.workers, [&](int i) {
    const std::uint64_t seed = rng::derive(cfg.run.seed, "initial-scale", static_cast<std::uint64_t>(i));
    RealizationLab lab(with_seed(cfg.model, seed), cutoff);
    TrialOutcome o;
    for (double energy : grid.values()) {
      if (classify_singular(lab, box, energy, mass).singular) {
        o.s = true;
        o.witness_energy_s = energy;
        break;
      }
    }
    return o;
  });

  int count = 0;
  for (const TrialOutcome& o : outcomes) count += o.s ? 1 : 0;
  return static_cast<double>(count) / trials;
}

namespace {

// Distance to the nearer point of the peak's swap orbit. Identical site
// potentials make |psi| swap-symmetric, so doublet states carry two mirror
// peaks; measuring from the orbit collapses both bumps onto one decay curve.
int decay_distance(const Point& v, const Point& peak, int d, int particles) {
  const int direct = point_distance(v, peak);
  if (particles != 2) return direct;
  int swapped = 0;
  for (int a = 0; a < d; ++a) {
    const auto ai = static_cast<std::size_t>(a);
    const auto bi = static_cast<std::size_t>(a + d);
    swapped = std::max(swapped, std::abs(v[ai] - peak[bi]));
    swapped = std::max(swapped, std::abs(v[bi] - peak[ai]));
  }
  return std::min(direct, swapped);
}

}  // namespace

std::vector<EigenDecayRow> eigen_decay_experiment(const LabConfig& cfg, double energy_lo,
                                                  double energy_hi) {
  const int d = cfg.model.dim_per_particle;
  Point center(static_cast<std::size_t>(d * cfg.model.particles), 0);
  // Offset the second particle by one site so the center cell is not on the
  // swap-symmetry axis.
  if (cfg.model.particles == 2) center[static_cast<std::size_t>(d)] = 1;
  const LatticeBox box{center, cfg.experiment.eigen_radius, d, cfg.model.particles};

  std::vector<EigenDecayRow> rows;
  for (int r = 0; r < cfg.experiment.eigen_realizations; ++r) {
    const std::uint64_t seed = rng::derive(cfg.run.seed, "eigen-decay", static_cast<std::uint64_t>(r));
    const ModelConfig m = with_seed(cfg.model, seed);
    const auto op = FiniteVolumeOperator::assemble(
        box, m.mesh, alloy_potential(m.field, m.profile, m.interaction, d, m.particles));
    const SmallestEigs eigs = smallest_eigenvalues(op, cfg.experiment.eigen_states, true);

    const std::vector<Point> cells = lattice_points(box);
    for (std::size_t j = 0; j < eigs.values.size(); ++j) {
      const double energy = eigs.values[j];
      if (energy < energy_lo || energy > energy_hi) continue;  // honest empty when none land inside

      const std::vector<double> profile = cell_norm_profile(op, eigs.vectors.col(static_cast<int>(j)));
      std::size_t peak = 0;
      for (std::size_t i = 1; i < profile.size(); ++i) {
        if (profile[i] > profile[peak]) peak = i;
      }

      EigenDecayRow row;
      row.seed = seed;
      row.energy = energy;
      row.peak_cell = cells[peak];

      // Below ~7 decades under the peak the profile is eigensolver noise, a
      // flat plateau that would drag the fitted slope toward zero.
      const double floor = std::max(1e-12, 1e-7 * profile[peak]);

      // The decay statement is an envelope bound, so the regression runs on
      // the radial maximum: one point per distance ring, the max cell mass on
      // it. Per-cell least squares would be dominated by the spread across a
      // ring (a product state decays per coordinate, not per ring).
      std::map<int, double> envelope;
      for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i] <= floor) continue;
        const int radius = decay_distance(cells[i], cells[peak], d, cfg.model.particles);
        auto [it, fresh] = envelope.emplace(radius, profile[i]);
        if (!fresh) it->second = std::max(it->second, profile[i]);
        row.profile.emplace_back(radius, std::log(profile[i]));
      }
      std::vector<double> xs, ys;
      for (const auto& [radius, value] : envelope) {
        xs.push_back(static_cast<double>(radius));
        ys.push_back(std::log(value));
      }
      row.cells_fit = static_cast<int>(xs.size());
      if (xs.size() >= 3) {
        const LinearFit fit = linear_fit(xs, ys);
        row.m_hat = -fit.slope;
        row.intercept = fit.intercept;
        row.r2 = fit.r2;
        row.sufficient = true;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

MsaRunResult run_msa(const LabConfig& cfg) {
  validate(cfg);

  MsaRunResult result;
  result.schedule = scale_schedule(cfg.schedule.l0, cfg.msa.params.alpha, cfg.msa.params.mass,
                                   cfg.schedule.k_max);
  result.interval = calibrate_interval(cfg);
  result.grid = make_energy_grid(result.interval.lo, result.interval.hi, cfg.experiment.energy_points);

  if (cfg.experiment.trials > 0) {
    result.initial_estimate =
        initial_scale_estimate(cfg, result.grid, result.interval.cutoff, cfg.experiment.trials);
  }

  for (PairCategory cat : cfg.experiment.categories) {
    for (std::size_t k = 0; k < result.schedule.scales.size(); ++k) {
      PairEstimate est = mc_pair_estimate(cfg, cat, static_cast<int>(k), result.schedule,
                                          result.grid, result.interval.cutoff);
      result.reports.push_back(bound_check(est.tallies, est.scale, cfg.msa.exponent_p));
      result.estimates.push_back(std::move(est));
    }
  }
  return result;
}

}  // namespace msalab
