#include "msalab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "msalab/green.hpp"

namespace msalab {

std::vector<double> EnergyGrid::values() const {
  std::vector<double> out;
  if (points <= 0 || hi < lo) return out;
  if (points == 1) {
    out.push_back(lo);
    return out;
  }
  out.reserve(static_cast<std::size_t>(points));
  const double step = (hi - lo) / (points - 1);
  for (int i = 0; i < points; ++i) out.push_back(lo + step * i);
  out.back() = hi;  // endpoint exactly, independent of rounding in the sum
  return out;
}

double EnergyGrid::spacing() const {
  if (points <= 1 || hi < lo) return 0.0;
  return (hi - lo) / (points - 1);
}

EnergyGrid make_energy_grid(double lo, double hi, int points) {
  if (!(lo == lo) || !(hi == hi)) throw std::invalid_argument("energy grid bounds must be finite");
  if (points < 0) throw std::invalid_argument("energy grid needs a non-negative point count");
  return EnergyGrid{lo, hi, points};
}

namespace {

// Offsets along one axis for sub-box centers: |offset| <= reach, either every
// integer or multiples of the stride. Sorted ascending so enumeration order is
// reproducible.
std::vector<int> axis_offsets(int reach, int stride) {
  std::vector<int> out;
  for (int o = -((reach / stride) * stride); o <= reach; o += stride) out.push_back(o);
  return out;
}

}  // namespace

std::vector<LatticeBox> enumerate_subboxes(const LatticeBox& box, double alpha,
                                           bool exhaustive) {
  const int radius = box.radius;
  const int lmin = min_subscale(radius, alpha);

  std::vector<int> scales;
  if (exhaustive) {
    for (int l = lmin; l <= radius; ++l) scales.push_back(l);
  } else {
    for (int l = lmin; l < radius; l *= 2) scales.push_back(l);
    scales.push_back(radius);
  }

  const int dims = box.dim();
  std::vector<LatticeBox> out;
  for (int l : scales) {
    const int reach = radius - l;
    const int stride = exhaustive ? 1 : std::max(1, (l + 1) / 2);
    const std::vector<int> offsets = axis_offsets(reach, stride);

    std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
    while (true) {
      Point center(box.center);
      for (int a = 0; a < dims; ++a) center[static_cast<std::size_t>(a)] += offsets[idx[static_cast<std::size_t>(a)]];
      out.push_back(LatticeBox{center, l, box.dim_per_particle, box.particles});

      int axis = dims - 1;
      while (axis >= 0) {
        auto& i = idx[static_cast<std::size_t>(axis)];
        if (++i < offsets.size()) break;
        i = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }
  return out;
}

ResonanceResult classify_resonant(RealizationLab& lab, const LatticeBox& box, double energy,
                                  const MsaParameters& params) {
  if (energy >= lab.spectral_cutoff()) {
    throw std::invalid_argument("classify_resonant: energy must sit below the certified spectral cutoff");
  }
  validate(params);

  ResonanceResult res;
  res.exhaustive = params.exhaustive_subcubes;

  double best_margin = std::numeric_limits<double>::infinity();
  for (const LatticeBox& sub : enumerate_subboxes(box, params.alpha, params.exhaustive_subcubes)) {
    const double threshold = resonance_threshold(sub.radius);
    const double dist = lab.window(sub).dist(energy);
    ++res.subboxes_checked;
    if (dist < threshold) {
      res.resonant = true;
      res.witness = sub;
      res.witness_distance = dist;
      res.witness_threshold = threshold;
      return res;
    }
    if (dist - threshold < best_margin) {
      best_margin = dist - threshold;
      res.witness = sub;
      res.witness_distance = dist;
      res.witness_threshold = threshold;
    }
  }
  return res;
}

SingularityResult classify_singular(RealizationLab& lab, const LatticeBox& box, double energy,
                                    double mass) {
  SingularityResult res;
  res.threshold = singularity_threshold(mass, box.radius);

  const std::vector<Point> targets = out_layer(box);
  if (targets.empty()) throw std::invalid_argument("classify_singular: box has an empty out-layer");

  try {
    GreenSolver& solver = lab.green(box, energy);
    const std::vector<double> norms = solver.norms_against(targets, box.center);
    for (std::size_t i = 0; i < norms.size(); ++i) {
      if (norms[i] > res.witness_norm) {
        res.witness_norm = norms[i];
        res.witness_cell = targets[i];
      }
    }
    res.singular = res.witness_norm > res.threshold;
  } catch (const NearSingularError&) {
    // Energy indistinguishable from the spectrum: the bound has no content,
    // so the box counts as singular rather than silently passing.
    res.singular = true;
    res.near_singular = true;
    res.witness_norm = std::numeric_limits<double>::infinity();
    res.witness_cell = box.center;
  }
  return res;
}

namespace {

// Tunneling for a single-particle box: scan every sub-box center and track
// per-axis extremes of the singular ones; two disjoint singular sub-boxes
// exist iff some axis extent reaches 2l+1.
bool tunneling_direct(RealizationLab& lab, const LatticeBox& box, const EnergyGrid& grid,
                      double mass, int sub_radius, TunnelingResult& res) {
  const int radius = box.radius;
  const int sep = 2 * sub_radius + 1;
  if (radius < sep) return false;  // no room for two disjoint placements

  const int dims = box.dim();
  const int reach = radius - sub_radius;

  for (double energy : grid.values()) {
    ++res.energies_checked;

    std::vector<Point> singular;
    std::vector<int> lo(static_cast<std::size_t>(dims), 0), hi(static_cast<std::size_t>(dims), 0);
    std::vector<std::size_t> lo_at(static_cast<std::size_t>(dims), 0), hi_at(static_cast<std::size_t>(dims), 0);

    LatticeBox probe{box.center, sub_radius, box.dim_per_particle, box.particles};
    std::vector<std::size_t> idx(static_cast<std::size_t>(dims), 0);
    const std::vector<int> offsets = axis_offsets(reach, 1);
    bool found = false;
    while (!found) {
      for (int a = 0; a < dims; ++a) {
        probe.center[static_cast<std::size_t>(a)] =
            box.center[static_cast<std::size_t>(a)] + offsets[idx[static_cast<std::size_t>(a)]];
      }
      if (classify_singular(lab, probe, energy, mass).singular) {
        singular.push_back(probe.center);
        for (int a = 0; a < dims; ++a) {
          const auto ai = static_cast<std::size_t>(a);
          const int c = probe.center[ai];
          if (singular.size() == 1 || c < lo[ai]) { lo[ai] = c; lo_at[ai] = singular.size() - 1; }
          if (singular.size() == 1 || c > hi[ai]) { hi[ai] = c; hi_at[ai] = singular.size() - 1; }
        }
        for (int a = 0; a < dims && !found; ++a) {
          const auto ai = static_cast<std::size_t>(a);
          if (hi[ai] - lo[ai] >= sep) {
            res.tunneling = true;
            res.witness_energy = energy;
            res.witness_a = singular[lo_at[ai]];
            res.witness_b = singular[hi_at[ai]];
            found = true;
          }
        }
      }

      int axis = dims - 1;
      while (axis >= 0) {
        auto& i = idx[static_cast<std::size_t>(axis)];
        if (++i < offsets.size()) break;
        i = 0;
        --axis;
      }
      if (axis < 0) break;
    }
    if (found) return true;
  }
  return false;
}

}  // namespace

TunnelingResult classify_tunneling(RealizationLab& lab, const LatticeBox& box,
                                   const EnergyGrid& grid, double mass, int sub_radius) {
  if (sub_radius < 1) throw std::invalid_argument("classify_tunneling: sub_radius must be at least 1");

  TunnelingResult res;
  res.grid_spacing = grid.spacing();

  if (box.particles == 1) {
    tunneling_direct(lab, box, grid, mass, sub_radius, res);
    return res;
  }

  // A two-particle box tunnels when either single-particle factor does.
  for (int j = 0; j < box.particles; ++j) {
    if (tunneling_direct(lab, box.factor(j), grid, mass, sub_radius, res)) return res;
  }
  return res;
}

}  // namespace msalab
