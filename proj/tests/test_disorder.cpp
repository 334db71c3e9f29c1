#include <cmath>
#include <map>

#include "doctest.h"
#include "msalab/disorder.hpp"
#include "msalab/rng.hpp"
#include "msalab/stats.hpp"

using namespace msalab;

TEST_CASE("tent bump interpolates site amplitudes") {
  BumpProfile tent;  // tent, R = 1
  std::map<int, double> amp{{0, 5.0}};
  SiteAmplitudeFn f = [&](const Point& s) {
    auto it = amp.find(s[0]);
    return it == amp.end() ? 0.0 : it->second;
  };
  CHECK(potential_value(f, tent, {0.5}) == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(potential_value(f, tent, {0.0}) == doctest::Approx(5.0).epsilon(1e-14));

  amp = {{0, 2.0}, {1, 4.0}};
  CHECK(potential_value(f, tent, {0.25}) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("two-particle potential sums the single-particle values") {
  BumpProfile tent;
  AmplitudeField field{AmplitudeLaw::Uniform, 10.0, 1.0, 99};
  const double v1 = potential_value(field, tent, {0.0});
  const double v2 = potential_value(field, tent, {3.5});
  CHECK(two_particle_potential(field, tent, {0.0, 3.5}, 1) ==
        doctest::Approx(v1 + v2).epsilon(1e-14));
}

TEST_CASE("amplitudes are reproducible and site-decoupled") {
  AmplitudeField a{AmplitudeLaw::Uniform, 10.0, 1.0, 1234};
  AmplitudeField b{AmplitudeLaw::Uniform, 10.0, 1.0, 1234};
  AmplitudeField c{AmplitudeLaw::Uniform, 10.0, 1.0, 1235};
  int differs = 0;
  for (int s = -500; s < 500; ++s) {
    const double va = a.value({s});
    CHECK(va == b.value({s}));  // bit identical
    CHECK(va >= 0.0);
    CHECK(va <= 10.0);
    if (va != c.value({s})) ++differs;
  }
  CHECK(differs > 990);  // a different seed gives a different field
}

TEST_CASE("uniform law passes a coarse KS check") {
  AmplitudeField f{AmplitudeLaw::Uniform, 1.0, 1.0, 777};
  std::vector<double> draws;
  draws.reserve(10000);
  for (int s = 0; s < 10000; ++s) draws.push_back(f.value({s}));
  CHECK(ks_statistic_uniform(draws) < 0.05);
}

TEST_CASE("hoelder law stays in range and reduces to uniform at b = 1") {
  AmplitudeField h{AmplitudeLaw::Hoelder, 4.0, 0.5, 31};
  AmplitudeField u{AmplitudeLaw::Uniform, 4.0, 1.0, 31};
  for (int s = 0; s < 200; ++s) {
    const double vh = h.value({s});
    CHECK(vh >= 0.0);
    CHECK(vh <= 4.0);
    CHECK(vh <= u.value({s}) + 1e-12);  // U^2 <= U pushes mass toward 0
  }
  AmplitudeField h1{AmplitudeLaw::Hoelder, 4.0, 1.0, 31};
  for (int s = 0; s < 200; ++s) CHECK(h1.value({s}) == u.value({s}));

  AmplitudeField bad{AmplitudeLaw::Hoelder, 4.0, 1.5, 31};
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}

TEST_CASE("covering check accepts the unit tent and rejects a scaled one") {
  BumpProfile tent;
  CoveringReport ok = covering_check(tent, 1, 3);
  CHECK(ok.covered);
  CHECK(ok.min_value == doctest::Approx(1.0).epsilon(1e-12));

  BumpProfile half{BumpKind::Tent, 1.0, 0.5};
  CoveringReport bad = covering_check(half, 1, 3);
  CHECK(!bad.covered);
  CHECK(bad.min_value == doctest::Approx(0.5).epsilon(1e-12));

  BumpProfile plateau{BumpKind::Plateau, 1.0};
  CHECK(covering_check(plateau, 1, 3).covered);
  CHECK(covering_check(tent, 2, 2).covered);  // d = 2 product tent still covers
}

TEST_CASE("interaction potentials") {
  InteractionPotential step{InteractionKind::Step, 4.0, 1.0};
  CHECK(step.value({0.0}, {1.0}) == 4.0);
  CHECK(step.value({0.0}, {1.5}) == 0.0);

  InteractionPotential tent{InteractionKind::Tent, 4.0, 2.0};
  CHECK(tent.value({0.0}, {1.0}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(tent.value({0.0}, {2.5}) == 0.0);

  InteractionPotential degenerate{InteractionKind::Tent, 4.0, 0.0};
  CHECK_THROWS_AS(validate(degenerate), std::invalid_argument);

  InteractionPotential onsite{InteractionKind::Step, 2.0, 0.0};
  CHECK(onsite.value({3.0}, {3.0}) == 2.0);
  CHECK(onsite.value({3.0}, {4.0}) == 0.0);
}
