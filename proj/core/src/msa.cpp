#include "msalab/msa.hpp"

#include <cmath>
#include <stdexcept>

namespace msalab {

void validate(const MsaParameters& p) {
  if (!(p.alpha > 1.0) || !(p.alpha < 2.0))
    throw std::invalid_argument("msa: alpha must lie in (1, 2)");
  if (!(p.mass >= 0.0)) throw std::invalid_argument("msa: mass must be >= 0");
  if (!(p.c_geom > 0.0)) throw std::invalid_argument("msa: c_geom must be positive");
  if (p.cluster_budget < 1) throw std::invalid_argument("msa: cluster budget must be >= 1");
  if (!(p.neighborhood_scale >= 1.0))
    throw std::invalid_argument("msa: neighborhood scale A must be >= 1");
}

double decay_exponent(double mass, double scale) {
  return mass * (scale + std::pow(scale, 0.75));
}

int min_subscale(int radius, double alpha) {
  if (radius < 1) throw std::invalid_argument("msa: radius must be >= 1");
  return static_cast<int>(std::ceil(std::pow(static_cast<double>(radius), 1.0 / alpha) - 1e-9));
}

double resonance_threshold(int subscale) {
  return std::exp(-std::sqrt(static_cast<double>(subscale)));
}

double singularity_threshold(double mass, int radius) {
  return std::exp(-decay_exponent(mass, static_cast<double>(radius)));
}

double q_coefficient(double mass, int subscale, int cluster_budget, int dim, double c_prime) {
  const double l = static_cast<double>(subscale);
  return std::exp(-decay_exponent(mass, l)) * std::exp(std::sqrt(l)) * c_prime *
         std::pow(cluster_budget * l, dim - 1);
}

MassRescalingReport mass_rescaling_check(double mass, int scale, int next) {
  if (next <= scale) throw std::invalid_argument("msa: next scale must exceed the current one");
  const double l = static_cast<double>(scale);
  MassRescalingReport r;
  r.rescaled_rate = mass * (1.0 + std::pow(l, -0.25)) * (1.0 - std::pow(l, -0.5));
  r.required_rate = mass * (1.0 + std::pow(static_cast<double>(next), -0.25));
  r.expansion =
      1.0 + std::pow(l, -0.25) - std::pow(l, -0.5) - std::pow(l, -0.75);
  r.expansion_alt =
      1.0 + std::pow(l, -0.25) - std::pow(l, -0.5) - std::pow(l, -0.125);
  r.holds = r.rescaled_rate > r.required_rate;
  return r;
}

DescentBound radial_descent_bound(double q, int radius, int cover_width, int subscale,
                                  double max_f) {
  if (!(q > 0.0) || !(q < 1.0))
    throw std::invalid_argument("descent: q must lie in (0, 1)");
  if (subscale < 1) throw std::invalid_argument("descent: sub-scale must be >= 1");
  DescentBound b;
  b.exponent = static_cast<double>(radius - cover_width - 3 * subscale) / subscale;
  if (b.exponent <= 0.0) {
    b.bound = max_f;
    b.degenerate = true;
    return b;
  }
  b.bound = std::pow(q, b.exponent) * max_f;
  return b;
}

int next_scale(int radius, double alpha) {
  if (radius < 2) throw std::invalid_argument("schedule: radius must be >= 2");
  const double raw = std::pow(static_cast<double>(radius), alpha);
  return static_cast<int>(std::ceil(raw - 1e-9));
}

ScaleSchedule scale_schedule(int l0, double alpha, double m0, int k_max, int feasibility_cap) {
  if (l0 < 2) throw std::invalid_argument("schedule: L0 must be >= 2");
  if (!(alpha > 1.0) || !(alpha < 2.0))
    throw std::invalid_argument("schedule: alpha must lie in (1, 2)");
  if (k_max < 0) throw std::invalid_argument("schedule: k_max must be >= 0");
  ScaleSchedule s;
  s.l0 = l0;
  s.alpha = alpha;
  s.m0 = m0;
  s.scales.push_back(l0);
  s.masses.push_back(m0);
  for (int k = 0; k < k_max; ++k) {
    const int cur = s.scales.back();
    const int nxt = next_scale(cur, alpha);
    if (nxt > feasibility_cap) {
      s.truncated = true;
      break;
    }
    s.scales.push_back(nxt);
    s.masses.push_back(s.masses.back() * (1.0 - std::pow(static_cast<double>(cur), -0.5)));
  }
  return s;
}

}  // namespace msalab
