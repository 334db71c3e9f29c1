#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace msalab {

// Lattice geometry for one- and two-particle cubes under the max norm.
// A configuration point for n particles in d dimensions has D = n*d integer
// coordinates; all boxes are axis-aligned cubes centered at lattice points.

using Point = std::vector<int>;

std::string format_point(const Point& p);

// Max-norm distance between two points of equal dimension.
int point_distance(const Point& a, const Point& b);

// Closed cube of radius L (side 2L+1 lattice sites per axis) centered at a
// lattice point. For n = 2 the cube lives in the configuration lattice Z^{2d}
// and its two particle projections are the cubes around the two center halves.
struct LatticeBox {
  Point center;
  int radius = 1;   // L >= 1
  int dim_per_particle = 1;  // d
  int particles = 1;         // n, 1 or 2

  LatticeBox() = default;
  LatticeBox(Point c, int L, int d, int n);

  int dim() const { return dim_per_particle * particles; }
  std::int64_t lattice_point_count() const;  // (2L+1)^dim
  std::string key() const;                   // stable cache/log key

  bool contains(const Point& p) const;
  // max-norm distance from p to the cube, 0 if inside
  int distance_to(const Point& p) const;

  // Projection cube of particle j (0-based) for two-particle boxes.
  LatticeBox factor(int j) const;
};

// All lattice points of the box, lexicographic order.
std::vector<Point> lattice_points(const LatticeBox& box);

// Out-layer: lattice points v with L-2 < ||v - u|| <= L (the two outermost
// shells). Requires L >= 2.
std::vector<Point> out_layer(const LatticeBox& box);

struct BoxBoundary {
  std::vector<Point> inner;  // x in B with dist(x, complement) = 1
  std::vector<Point> outer;  // x outside B with dist(x, B) = 1
  std::vector<std::pair<Point, Point>> edges;  // unit-distance pairs straddling
};

BoxBoundary boundaries(const LatticeBox& box);

// Min over point pairs of the max-norm distance; 0 iff the boxes intersect.
int box_distance(const LatticeBox& a, const LatticeBox& b);

// Two-particle box: distance between the two single-particle projection cubes.
// The box supports the interaction when that distance is <= r0.
bool is_interactive(const LatticeBox& box, double range_r0);

// True when the unions of particle projections of the two boxes are disjoint
// subsets of Z^d. Disjoint projections receive disorder samples from disjoint
// site sets, hence independent ones.
bool projections_disjoint(const LatticeBox& a, const LatticeBox& b);

// Interleaved radial annuli 0 < a_1 < b_1 < ... < b_j < L around a box center.
struct AnnularCover {
  std::vector<std::pair<int, int>> shells;  // (a_i, b_i)

  int width() const;  // sum of b_i - a_i
  void validate(int outer_radius) const;   // throws std::invalid_argument
};

}  // namespace msalab
