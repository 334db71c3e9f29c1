#include "msalab/descent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "msalab/green.hpp"

namespace msalab {

ResolventChainSample resolvent_chain_sample(RealizationLab& lab, const LatticeBox& inner_box,
                                            const LatticeBox& big_box, const Point& target,
                                            double energy) {
  if (inner_box.dim_per_particle != big_box.dim_per_particle ||
      inner_box.particles != big_box.particles) {
    throw std::invalid_argument("resolvent_chain_sample: boxes live in different spaces");
  }
  for (int a = 0; a < big_box.dim(); ++a) {
    const auto ai = static_cast<std::size_t>(a);
    const int off = std::abs(inner_box.center[ai] - big_box.center[ai]);
    if (off + inner_box.radius > big_box.radius - 3) {
      throw std::invalid_argument("resolvent_chain_sample: inner box needs a margin of 3 inside the enclosing box");
    }
  }
  if (!big_box.contains(target) || inner_box.contains(target)) {
    throw std::invalid_argument("resolvent_chain_sample: target must lie in the enclosing box outside the inner one");
  }

  GreenSolver& inner_solver = lab.green(inner_box, energy);
  GreenSolver& big_solver = lab.green(big_box, energy);

  const std::vector<Point> exits = out_layer(inner_box);
  const std::vector<double> first_leg = inner_solver.norms_against(exits, inner_box.center);

  // One factor pass at the target covers the lhs and every second leg.
  std::vector<Point> probes(exits);
  probes.push_back(inner_box.center);
  const std::vector<double> from_target = big_solver.norms_against(probes, target);

  ResolventChainSample sample;
  sample.boundary_terms = static_cast<int>(exits.size());
  sample.lhs = from_target.back();
  for (std::size_t i = 0; i < exits.size(); ++i) sample.rhs += first_leg[i] * from_target[i];
  sample.ratio = sample.rhs > 0.0 ? sample.lhs / sample.rhs
                                  : (sample.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  return sample;
}

namespace {

enum class RuleKind { Exempt, OffSingular, OnSingular };

struct PointRule {
  RuleKind kind = RuleKind::Exempt;
  std::vector<std::size_t> shell;  // indices into the lattice point list
};

// Shared between the checker and the synthetic generator so both constrain
// exactly the same points against exactly the same shells.
std::vector<PointRule> compute_rules(const std::vector<Point>& points, const LatticeBox& box,
                                     int ell, const ClusterDecomposition& clusters,
                                     double scale_a) {
  const int shell_hi = std::max(ell, static_cast<int>(scale_a * ell));
  std::vector<PointRule> rules(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Point& x = points[i];

    const ClusterBox* home = nullptr;
    for (const ClusterBox& c : clusters.clusters) {
      if (point_distance(x, c.center) <= c.radius) {
        home = &c;
        break;
      }
    }

    int lo = 0, hi = 0;
    if (home != nullptr) {
      const int exit_steps = home->radius - point_distance(x, home->center) + 1;
      const int rho = std::clamp(exit_steps + ell, ell, shell_hi);
      lo = rho;
      hi = rho + 2 * ell - 1;
      rules[i].kind = RuleKind::OnSingular;
    } else {
      if (box.radius - point_distance(x, box.center) < ell) continue;  // boundary exemption
      lo = hi = 2 * ell - 1;
      rules[i].kind = RuleKind::OffSingular;
    }

    for (std::size_t j = 0; j < points.size(); ++j) {
      const int d = point_distance(points[j], x);
      if (d >= lo && d <= hi) rules[i].shell.push_back(j);
    }
    if (rules[i].shell.empty()) rules[i].kind = RuleKind::Exempt;
  }
  return rules;
}

void validate_subharmonic_args(double q, int ell, const ClusterDecomposition& clusters,
                               double scale_a) {
  if (ell < 1) throw std::invalid_argument("subharmonic: l must be at least 1");
  if (!(q > 0.0)) throw std::invalid_argument("subharmonic: q must be positive");
  if (!(scale_a >= 1.0)) throw std::invalid_argument("subharmonic: neighborhood scale A must be at least 1");
  if (!clusters.clusters.empty() && clusters.ell != ell) {
    throw std::invalid_argument("subharmonic: cluster decomposition was built at a different sub-scale");
  }
}

}  // namespace

SubharmonicReport subharmonic_check(const std::function<double(const Point&)>& f,
                                    const LatticeBox& box, double q, int ell,
                                    const ClusterDecomposition& clusters, double scale_a,
                                    double tolerance) {
  validate_subharmonic_args(q, ell, clusters, scale_a);

  const std::vector<Point> points = lattice_points(box);
  std::vector<double> vals(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) vals[i] = f(points[i]);

  const std::vector<PointRule> rules = compute_rules(points, box, ell, clusters, scale_a);

  SubharmonicReport report;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (rules[i].kind == RuleKind::Exempt) {
      ++report.exempt;
      continue;
    }
    double shell_max = 0.0;
    for (std::size_t j : rules[i].shell) shell_max = std::max(shell_max, vals[j]);
    const double allowed = q * shell_max;
    ++report.checked;
    if (vals[i] > allowed + tolerance * std::abs(allowed)) {
      report.violations.push_back(SubharmonicViolation{points[i], vals[i], allowed,
                                                       rules[i].kind == RuleKind::OnSingular});
    }
  }
  report.ok = report.violations.empty();
  return report;
}

std::map<Point, double> boundary_green_profile(RealizationLab& lab, const LatticeBox& box,
                                               double energy) {
  GreenSolver& solver = lab.green(box, energy);
  const std::vector<Point> points = lattice_points(box);
  const BoxBoundary bd = boundaries(box);

  std::vector<double> best(points.size(), 0.0);
  for (const Point& y : bd.inner) {
    const std::vector<double> norms = solver.norms_against(points, y);
    for (std::size_t i = 0; i < points.size(); ++i) best[i] = std::max(best[i], norms[i]);
  }

  std::map<Point, double> profile;
  for (std::size_t i = 0; i < points.size(); ++i) profile[points[i]] = best[i];
  return profile;
}

std::map<Point, double> synthetic_subharmonic(const LatticeBox& box, double q, int ell,
                                              const ClusterDecomposition& clusters, double scale_a,
                                              rng::Stream& stream) {
  validate_subharmonic_args(q, ell, clusters, scale_a);
  if (!(q < 1.0)) throw std::invalid_argument("synthetic_subharmonic: q must be below 1");

  const std::vector<Point> points = lattice_points(box);
  const std::vector<PointRule> rules = compute_rules(points, box, ell, clusters, scale_a);

  std::vector<double> vals(points.size(), 0.0);
  std::vector<double> damp(points.size(), 1.0);
  std::size_t constrained_idx = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (rules[i].kind == RuleKind::Exempt) {
      vals[i] = stream.next_uniform(0.5, 1.0);
    } else {
      // Mostly strict contraction, with a sprinkling of sites sitting exactly
      // on the allowed ceiling.
      damp[i] = (constrained_idx % 7 == 3) ? 1.0 : stream.next_uniform(0.3, 1.0);
      ++constrained_idx;
    }
  }

  // Monotone Gauss-Seidel growth from the boundary ring; values only rise and
  // stay below 1, so the float iteration reaches an exact fixpoint.
  for (int sweep = 0; sweep < 100000; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (rules[i].kind == RuleKind::Exempt) continue;
      double shell_max = 0.0;
      for (std::size_t j : rules[i].shell) shell_max = std::max(shell_max, vals[j]);
      const double next = damp[i] * (q * shell_max);
      if (next != vals[i]) {
        vals[i] = next;
        changed = true;
      }
    }
    if (!changed) {
      std::map<Point, double> out;
      for (std::size_t i = 0; i < points.size(); ++i) out[points[i]] = vals[i];
      return out;
    }
  }
  throw std::logic_error("synthetic_subharmonic: fixpoint iteration failed to settle");
}

}  // namespace msalab
