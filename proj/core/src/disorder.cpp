#include "msalab/disorder.hpp"

#include <cmath>
#include <stdexcept>

#include "msalab/rng.hpp"

namespace msalab {

double BumpProfile::value(const std::vector<double>& y) const {
  if (radius <= 0) throw std::invalid_argument("BumpProfile: radius must be positive");
  switch (kind) {
    case BumpKind::Tent: {
      double v = scale;
      for (double yi : y) {
        const double t = 1.0 - std::abs(yi) / radius;
        if (t <= 0) return 0.0;
        v *= t;
      }
      return v;
    }
    case BumpKind::Plateau: {
      for (double yi : y)
        if (std::abs(yi) > radius) return 0.0;
      return scale;
    }
  }
  return 0.0;
}

void validate(const AmplitudeField& field) {
  if (field.bound < 0) throw std::invalid_argument("AmplitudeField: bound M must be >= 0");
  if (field.exponent <= 0 || field.exponent > 1)
    throw std::invalid_argument("AmplitudeField: exponent b must lie in (0, 1]");
}

double AmplitudeField::value(const Point& site) const {
  std::uint64_t key = rng::derive(seed, "site-amplitude");
  for (int c : site) key = rng::combine(key, static_cast<std::uint64_t>(static_cast<std::int64_t>(c)));
  const double u = rng::uniform01(key);
  switch (law) {
    case AmplitudeLaw::Uniform:
      return bound * u;
    case AmplitudeLaw::Hoelder:
      return bound * std::pow(u, 1.0 / exponent);
  }
  return 0.0;
}

double potential_value(const SiteAmplitudeFn& amplitudes, const BumpProfile& profile,
                       const std::vector<double>& x) {
  const int d = static_cast<int>(x.size());
  const int reach = static_cast<int>(std::ceil(profile.radius));
  // enumerate the sites whose bump can reach x
  Point lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = static_cast<int>(std::ceil(x[i] - profile.radius));
    hi[i] = static_cast<int>(std::floor(x[i] + profile.radius));
    if (hi[i] - lo[i] > 2 * reach + 1)
      throw std::logic_error("potential_value: site window inconsistent");
  }
  double v = 0.0;
  Point s(lo);
  std::vector<double> y(d);
  while (true) {
    for (int i = 0; i < d; ++i) y[i] = x[i] - s[i];
    const double phi = profile.value(y);
    if (phi > 0) v += amplitudes(s) * phi;
    int axis = d - 1;
    while (axis >= 0) {
      if (s[axis] < hi[axis]) {
        ++s[axis];
        break;
      }
      s[axis] = lo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return v;
}

double potential_value(const AmplitudeField& field, const BumpProfile& profile,
                       const std::vector<double>& x) {
  return potential_value([&field](const Point& s) { return field.value(s); }, profile, x);
}

double two_particle_potential(const AmplitudeField& field, const BumpProfile& profile,
                              const std::vector<double>& x12, int dim_per_particle) {
  if (static_cast<int>(x12.size()) != 2 * dim_per_particle)
    throw std::invalid_argument("two_particle_potential: configuration point has wrong dimension");
  std::vector<double> x1(x12.begin(), x12.begin() + dim_per_particle);
  std::vector<double> x2(x12.begin() + dim_per_particle, x12.end());
  return potential_value(field, profile, x1) + potential_value(field, profile, x2);
}

CoveringReport covering_check(const BumpProfile& profile, int dim, int window_radius,
                              int samples_per_unit) {
  if (dim < 1 || window_radius < 1 || samples_per_unit < 1)
    throw std::invalid_argument("covering_check: bad arguments");
  const int reach = static_cast<int>(std::ceil(profile.radius));
  const int site_radius = window_radius + reach;
  const int steps = 2 * window_radius * samples_per_unit;

  CoveringReport rep;
  rep.min_value = 1e300;

  // sample grid over the window, sites over the enlarged cube
  std::vector<int> idx(dim, 0);
  std::vector<double> x(dim);
  while (true) {
    for (int i = 0; i < dim; ++i)
      x[i] = -window_radius + static_cast<double>(idx[i]) / samples_per_unit;
    double total = 0.0;
    Point s(dim, -site_radius);
    std::vector<double> y(dim);
    while (true) {
      for (int i = 0; i < dim; ++i) y[i] = x[i] - s[i];
      total += profile.value(y);
      int a = dim - 1;
      while (a >= 0) {
        if (s[a] < site_radius) {
          ++s[a];
          break;
        }
        s[a] = -site_radius;
        --a;
      }
      if (a < 0) break;
    }
    if (total < rep.min_value) {
      rep.min_value = total;
      rep.worst_x = x[0];
    }
    int a = dim - 1;
    while (a >= 0) {
      if (idx[a] < steps) {
        ++idx[a];
        break;
      }
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  rep.covered = rep.min_value >= 1.0 - 1e-12;
  return rep;
}

void validate(const InteractionPotential& u) {
  if (u.strength < 0) throw std::invalid_argument("InteractionPotential: strength c must be >= 0");
  if (u.range < 0) throw std::invalid_argument("InteractionPotential: range r0 must be >= 0");
  if (u.kind == InteractionKind::Tent && u.range == 0)
    throw std::invalid_argument(
        "InteractionPotential: tent interaction with range r0 = 0 is degenerate");
}

double InteractionPotential::value(const std::vector<double>& x1,
                                   const std::vector<double>& x2) const {
  validate(*this);
  if (x1.size() != x2.size())
    throw std::invalid_argument("InteractionPotential: dimension mismatch");
  double dist = 0.0;
  for (std::size_t i = 0; i < x1.size(); ++i) dist = std::max(dist, std::abs(x1[i] - x2[i]));
  switch (kind) {
    case InteractionKind::Step:
      return dist <= range ? strength : 0.0;
    case InteractionKind::Tent:
      return strength * std::max(0.0, 1.0 - dist / range);
  }
  return 0.0;
}

}  // namespace msalab
