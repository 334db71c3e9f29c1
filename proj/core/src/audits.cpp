#include "msalab/audits.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "msalab/clusters.hpp"
#include "msalab/experiments.hpp"
#include "msalab/green.hpp"
#include "msalab/msa.hpp"
#include "msalab/rng.hpp"
#include "msalab/separable.hpp"
#include "msalab/stats.hpp"

namespace msalab {

namespace {

struct ChainSampler {
  const LabConfig& cfg;
  std::uint64_t salt;
  int inner_radius;
  int outer_radius;
  double energy_lo;
  double energy_hi;

  // One randomized chain instance; throws NearSingularError when the draw is
  // unusable so the caller can replace it.
  ResolventChainSample draw(int attempt) const {
    const std::uint64_t key =
        rng::derive(cfg.run.seed, "cgeom", salt, static_cast<std::uint64_t>(attempt));
    rng::Stream st(key);

    const int d = cfg.model.dim_per_particle;
    const int dims = d * cfg.model.particles;
    const LatticeBox big{Point(static_cast<std::size_t>(dims), 0), outer_radius, d,
                         cfg.model.particles};

    const int reach = outer_radius - inner_radius - 3;
    Point inner_center(static_cast<std::size_t>(dims), 0);
    for (int a = 0; a < dims; ++a) {
      inner_center[static_cast<std::size_t>(a)] =
          static_cast<int>(st.next_below(static_cast<std::uint64_t>(2 * reach + 1))) - reach;
    }
    const LatticeBox inner{inner_center, inner_radius, d, cfg.model.particles};

    const std::vector<Point> rim = out_layer(big);
    const Point target = rim[st.next_below(rim.size())];
    const double energy = st.next_uniform(energy_lo, energy_hi);

    RealizationLab lab(with_seed(cfg.model, rng::combine(key, 0x9e3779b9ULL)), energy_hi + 1.0);
    return resolvent_chain_sample(lab, inner, big, target, energy);
  }
};

// Calibration energies span the interval the sweep actually runs on, extended
// half a unit below the spectrum; draws that land too close to an eigenvalue
// are skipped and replaced.
std::pair<double, double> chain_energy_range(const LabConfig& cfg) {
  const CalibratedInterval iv = calibrate_interval(cfg);
  return {iv.lo - 0.5, iv.hi};
}

}  // namespace

ChainCalibration calibrate_cgeom(const LabConfig& cfg, int samples, std::uint64_t salt,
                                 int inner_radius, int outer_radius) {
  if (samples < 1) throw std::invalid_argument("calibrate_cgeom: need at least one sample");
  if (inner_radius < 1 || outer_radius < inner_radius + 3) {
    throw std::invalid_argument("calibrate_cgeom: radii must leave the margin-3 enclosure");
  }

  const auto [e_lo, e_hi] = chain_energy_range(cfg);
  ChainSampler sampler{cfg, salt, inner_radius, outer_radius, e_lo, e_hi};
  ChainCalibration out;
  int attempt = 0;
  while (out.samples < samples) {
    if (attempt > 20 * samples) {
      throw SolverError("calibrate_cgeom: too many near-singular draws");
    }
    try {
      const ResolventChainSample s = sampler.draw(attempt++);
      out.ratios.push_back(s.ratio);
      out.c_geom = std::max(out.c_geom, s.ratio);
      ++out.samples;
    } catch (const NearSingularError&) {
      ++out.skipped_near_singular;
    }
  }
  return out;
}

ChainHoldout holdout_cgeom(const LabConfig& cfg, double c_geom, int samples, std::uint64_t salt,
                           int inner_radius, int outer_radius) {
  if (!(c_geom > 0)) throw std::invalid_argument("holdout_cgeom: calibrated constant must be positive");

  const auto [e_lo, e_hi] = chain_energy_range(cfg);
  ChainSampler sampler{cfg, salt, inner_radius, outer_radius, e_lo, e_hi};
  ChainHoldout out;
  out.c_geom = c_geom;
  int attempt = 0;
  while (out.samples < samples) {
    if (attempt > 20 * samples) throw SolverError("holdout_cgeom: too many near-singular draws");
    try {
      const ResolventChainSample s = sampler.draw(attempt++);
      ++out.samples;
      out.worst_ratio = std::max(out.worst_ratio, s.ratio);
      if (s.ratio > c_geom) ++out.violations;
    } catch (const NearSingularError&) {
    }
  }
  return out;
}

DescentAudit radial_descent_audit(const LabConfig& cfg, int seeds, int radius, int ell,
                                  double energy_lo, double energy_hi) {
  if (seeds < 1) throw std::invalid_argument("radial_descent_audit: need at least one seed");
  if (ell < 1 || ell >= radius) throw std::invalid_argument("radial_descent_audit: need 1 <= l < radius");
  if (!(energy_lo <= energy_hi)) throw std::invalid_argument("radial_descent_audit: empty energy interval");

  const int d = cfg.model.dim_per_particle;
  const LatticeBox box{Point(static_cast<std::size_t>(d * cfg.model.particles), 0), radius, d,
                       cfg.model.particles};
  const double mass = cfg.msa.params.mass;
  const int budget = cfg.msa.params.cluster_budget;
  const double cutoff = energy_hi + 1.0;

  MsaParameters gate = cfg.msa.params;
  gate.exhaustive_subcubes = true;  // the descent hypothesis needs every sub-box checked

  DescentAudit audit;
  for (int i = 0; i < seeds; ++i) {
    DescentAuditCase c;
    c.seed = rng::derive(cfg.run.seed, "descent-live", static_cast<std::uint64_t>(i));
    c.energy = energy_lo + (energy_hi - energy_lo) * rng::uniform01(rng::derive(c.seed, "energy"));

    RealizationLab lab(with_seed(cfg.model, c.seed), cutoff);
    ++audit.cases;

    if (classify_resonant(lab, box, c.energy, gate).resonant) {
      c.skipped_resonant = true;
      ++audit.skipped;
      audit.details.push_back(c);
      continue;
    }

    const ClusterDecomposition clusters =
        scan_singular_subboxes(lab, box, ell, c.energy, mass, budget);
    if (clusters.degenerate()) {
      c.skipped_degenerate = true;
      ++audit.skipped;
      audit.details.push_back(c);
      continue;
    }
    c.cover_width = clusters.cover.width();

    const std::map<Point, double> profile = boundary_green_profile(lab, box, c.energy);
    double max_f = 0.0;
    for (const auto& [pt, v] : profile) max_f = std::max(max_f, v);
    c.f_center = profile.at(box.center);

    c.q = q_coefficient(mass, ell, budget, box.dim(), cfg.msa.params.c_geom);
    if (c.q >= 1.0) {
      // No decay to certify; the trivial bound still must hold.
      c.exponent_degenerate = true;
      c.bound = max_f;
    } else {
      const DescentBound b =
          radial_descent_bound(c.q, radius, static_cast<int>(c.cover_width), ell, max_f);
      c.bound = b.bound;
      c.exponent_degenerate = b.degenerate;
    }
    c.violated = c.f_center > c.bound * (1.0 + 1e-9);

    ++audit.checked;
    if (c.violated) ++audit.violations;
    audit.details.push_back(c);
  }
  return audit;
}

DecouplingAudit decoupling_audit(const LabConfig& cfg, int seeds, int radius, double energy_lo,
                                 double energy_hi, int energy_points) {
  if (cfg.model.particles != 2) {
    throw std::invalid_argument("decoupling_audit: the implication concerns two-particle boxes");
  }
  if (seeds < 1) throw std::invalid_argument("decoupling_audit: need at least one seed");

  const int d = cfg.model.dim_per_particle;
  const int gap = 2 * radius + static_cast<int>(std::ceil(cfg.model.interaction.range)) + 1;
  Point center(static_cast<std::size_t>(2 * d), 0);
  center[static_cast<std::size_t>(d)] = gap;
  const LatticeBox box{center, radius, d, 2};
  if (is_interactive(box, cfg.model.interaction.range)) {
    throw std::logic_error("decoupling_audit: constructed box is unexpectedly interactive");
  }

  const EnergyGrid grid = make_energy_grid(energy_lo, energy_hi, energy_points);
  const double cutoff = energy_hi + 1.0;
  const double mass = cfg.msa.params.mass;
  const int sub_radius = min_subscale(radius, cfg.msa.params.alpha);

  MsaParameters gate = cfg.msa.params;
  gate.exhaustive_subcubes = true;

  DecouplingAudit audit;
  for (int i = 0; i < seeds; ++i) {
    const std::uint64_t seed = rng::derive(cfg.run.seed, "decoupling", static_cast<std::uint64_t>(i));
    RealizationLab lab(with_seed(cfg.model, seed), cutoff);

    const TunnelingResult tun = classify_tunneling(lab, box, grid, mass, sub_radius);

    for (double energy : grid.values()) {
      DecouplingCase c;
      c.seed = seed;
      c.energy = energy;
      ++audit.cases;

      if (classify_resonant(lab, box, energy, gate).resonant) {
        c.verdict = DecouplingVerdict::SkippedResonant;
        ++audit.skipped_resonant;
      } else if (tun.tunneling) {
        c.verdict = DecouplingVerdict::SkippedTunneling;
        ++audit.skipped_tunneling;
      } else {
        const SingularityResult sing = classify_singular(lab, box, energy, mass);
        c.witness_norm = sing.witness_norm;
        c.threshold = sing.threshold;
        if (sing.singular) {
          c.verdict = DecouplingVerdict::Counterexample;
          ++audit.counterexamples;
        } else {
          c.verdict = DecouplingVerdict::Holds;
          ++audit.holds;
        }
      }
      audit.details.push_back(c);
    }
  }
  return audit;
}

namespace {

void add_check(std::vector<CheckResult>& out, const std::string& name,
               const std::function<bool(std::string&)>& body) {
  CheckResult r;
  r.name = name;
  try {
    r.pass = body(r.detail);
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = e.what();
  }
  out.push_back(std::move(r));
}

}  // namespace

std::vector<CheckResult> run_check_suite(const LabConfig& cfg) {
  std::vector<CheckResult> out;

  add_check(out, "decay exponent micro-values", [](std::string& detail) {
    const double a = decay_exponent(1.0, 16);
    const double b = decay_exponent(2.0, 81);
    detail = "gamma(1,16)=" + std::to_string(a) + " gamma(2,81)=" + std::to_string(b);
    return a == 24.0 && b == 216.0;
  });

  add_check(out, "scale schedule arithmetic", [](std::string& detail) {
    const ScaleSchedule s = scale_schedule(8, 1.5, 1.0, 2);
    const ScaleSchedule t = scale_schedule(16, 1.5, 1.0, 1);
    std::ostringstream os;
    for (int l : s.scales) os << l << " ";
    detail = "scales " + os.str() + "m1(16)=" + std::to_string(t.masses.at(1));
    return s.scales == std::vector<int>{8, 23, 111} && t.masses.at(1) == 0.75;
  });

  add_check(out, "mass rescaling worked examples", [](std::string& detail) {
    const MassRescalingReport big = mass_rescaling_check(1.0, 256, 4096);
    const MassRescalingReport small = mass_rescaling_check(1.0, 4, 8);
    const MassRescalingReport zero = mass_rescaling_check(0.0, 256, 4096);
    detail = "L=256 holds=" + std::to_string(big.holds) + " L=4 holds=" + std::to_string(small.holds);
    return big.holds && !small.holds && !zero.holds;
  });

  add_check(out, "bump covering condition", [&cfg](std::string& detail) {
    const CoveringReport rep = covering_check(cfg.model.profile, cfg.model.dim_per_particle, 4);
    detail = "min bump sum " + std::to_string(rep.min_value);
    return rep.covered;
  });

  add_check(out, "config round-trip identity", [&cfg](std::string& detail) {
    const std::string once = serialize_config(cfg);
    const std::string twice = serialize_config(parse_config(once));
    detail = once == twice ? "byte-identical" : "serialization drifted";
    return once == twice;
  });

  add_check(out, "wilson zero-tally bound", [](std::string& detail) {
    const WilsonInterval w = wilson_interval(0, 200);
    detail = "hi=" + std::to_string(w.hi);
    return w.lo == 0.0 && w.hi > 0.018 && w.hi < 0.020;
  });

  add_check(out, "energy grid endpoints", [](std::string& detail) {
    const EnergyGrid g = make_energy_grid(0.0, 1.0, 11);
    const std::vector<double> v = g.values();
    detail = "spacing " + std::to_string(g.spacing());
    return v.size() == 11 && v.front() == 0.0 && v.back() == 1.0 &&
           std::abs(g.spacing() - 0.1) < 1e-15;
  });

  add_check(out, "singular cluster hand case", [](std::string& detail) {
    const LatticeBox big{Point{0}, 40, 1, 1};
    const ClusterDecomposition dec =
        build_singular_clusters({Point{6}, Point{18}}, big, 4, 3);
    detail = "clusters=" + std::to_string(dec.clusters.size()) +
             " W=" + std::to_string(dec.cover.width()) +
             " disjoint=" + std::to_string(dec.disjoint_count);
    const bool shape = dec.clusters.size() == 1 && dec.clusters.front().center == Point{12} &&
                       dec.clusters.front().radius == 10;
    const bool cover = dec.cover.width() == 20 && dec.disjoint_count == 2 && !dec.degenerate();
    const ClusterDecomposition tight =
        build_singular_clusters({Point{6}, Point{18}}, big, 4, 1);
    return shape && cover && tight.budget_exceeded;
  });

  add_check(out, "synthetic subharmonic descent", [&cfg](std::string& detail) {
    const LatticeBox box{Point{0}, 12, 1, 1};
    rng::Stream st(rng::derive(cfg.run.seed, "check-subharmonic"));
    const ClusterDecomposition empty;
    const auto f = synthetic_subharmonic(box, 0.5, 3, empty, 4.0, st);
    const SubharmonicReport rep = subharmonic_check(
        [&](const Point& p) { return f.at(p); }, box, 0.5, 3, empty, 4.0);
    double max_f = 0.0;
    for (const auto& [p, v] : f) max_f = std::max(max_f, v);
    const DescentBound b = radial_descent_bound(0.5, 12, 0, 3, max_f);
    detail = "violations=" + std::to_string(rep.violations.size());
    return rep.ok && f.at(Point{0}) <= b.bound * (1.0 + 1e-12);
  });

  add_check(out, "separable expansion cross-check", [&cfg](std::string& detail) {
    ModelConfig m = with_seed(cfg.model, rng::derive(cfg.run.seed, "check-separable"));
    m.dim_per_particle = 1;
    m.particles = 2;
    m.interaction.strength = 0.0;
    const LatticeBox pair{Point{0, 5}, 2, 1, 2};
    const auto pair_op = FiniteVolumeOperator::assemble(
        pair, m.mesh, alloy_potential(m.field, m.profile, m.interaction, 1, 2));
    const auto f1 = FiniteVolumeOperator::assemble(
        pair.factor(0), m.mesh, alloy_potential(m.field, m.profile, m.interaction, 1, 1));
    const auto f2 = FiniteVolumeOperator::assemble(
        pair.factor(1), m.mesh, alloy_potential(m.field, m.profile, m.interaction, 1, 1));
    const Point source{0, 5}, target{2, 3};
    const double energy = -0.5;
    const SeparableGreenResult sep =
        separable_green_norm(f1, f2, energy, source, target, 1e9);
    const double dense = dense_cell_norms(pair_op, energy, {target}, source).front();
    detail = "sep=" + std::to_string(sep.value) + " dense=" + std::to_string(dense);
    return sep.retained == sep.total_modes && std::abs(sep.value - dense) <= 1e-8;
  });

  add_check(out, "pair geometry contracts", [&cfg](std::string& detail) {
    if (cfg.model.particles != 2 || cfg.experiment.categories.empty()) {
      detail = "skipped: no two-particle pair categories configured";
      return true;
    }
    for (PairCategory cat : cfg.experiment.categories) {
      for (int v = 0; v < 4; ++v) {
        (void)pair_geometry(cat, cfg.schedule.l0, cfg.model.dim_per_particle,
                            cfg.model.interaction.range, v);
      }
    }
    detail = "all configured categories realizable";
    return true;
  });

  return out;
}

}  // namespace msalab
