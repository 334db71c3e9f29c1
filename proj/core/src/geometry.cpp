#include "msalab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace msalab {

std::string format_point(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ";";
    s += std::to_string(p[i]);
  }
  s += ")";
  return s;
}

int point_distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw std::invalid_argument("point_distance: dimension mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

LatticeBox::LatticeBox(Point c, int L, int d, int n)
    : center(std::move(c)), radius(L), dim_per_particle(d), particles(n) {
  if (L < 1) throw std::invalid_argument("LatticeBox: radius must be >= 1");
  if (d < 1) throw std::invalid_argument("LatticeBox: dimension must be >= 1");
  if (n != 1 && n != 2) throw std::invalid_argument("LatticeBox: particles must be 1 or 2");
  if (static_cast<int>(center.size()) != d * n)
    throw std::invalid_argument("LatticeBox: center has wrong dimension");
}

std::int64_t LatticeBox::lattice_point_count() const {
  std::int64_t c = 1;
  const std::int64_t side = 2 * static_cast<std::int64_t>(radius) + 1;
  for (int i = 0; i < dim(); ++i) c *= side;
  return c;
}

std::string LatticeBox::key() const {
  return format_point(center) + "L" + std::to_string(radius) + "d" +
         std::to_string(dim_per_particle) + "n" + std::to_string(particles);
}

bool LatticeBox::contains(const Point& p) const { return distance_to(p) == 0; }

int LatticeBox::distance_to(const Point& p) const {
  if (p.size() != center.size())
    throw std::invalid_argument("LatticeBox::distance_to: dimension mismatch");
  int d = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    d = std::max(d, std::max(0, std::abs(p[i] - center[i]) - radius));
  return d;
}

LatticeBox LatticeBox::factor(int j) const {
  if (particles != 2) throw std::invalid_argument("LatticeBox::factor: needs a two-particle box");
  if (j < 0 || j > 1) throw std::invalid_argument("LatticeBox::factor: index must be 0 or 1");
  Point c(center.begin() + j * dim_per_particle,
          center.begin() + (j + 1) * dim_per_particle);
  return LatticeBox(std::move(c), radius, dim_per_particle, 1);
}

namespace {

// Iterate the integer cube [-R, R]^dim around the center, calling f(point).
template <class F>
void for_each_offset(const Point& center, int R, F&& f) {
  const int dim = static_cast<int>(center.size());
  Point p(center);
  for (int i = 0; i < dim; ++i) p[i] -= R;
  while (true) {
    f(p);
    int axis = dim - 1;
    while (axis >= 0) {
      if (p[axis] < center[axis] + R) {
        ++p[axis];
        break;
      }
      p[axis] = center[axis] - R;
      --axis;
    }
    if (axis < 0) break;
  }
}

}  // namespace

std::vector<Point> lattice_points(const LatticeBox& box) {
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(box.lattice_point_count()));
  for_each_offset(box.center, box.radius, [&](const Point& p) { pts.push_back(p); });
  return pts;
}

std::vector<Point> out_layer(const LatticeBox& box) {
  if (box.radius < 2) throw std::invalid_argument("out_layer: radius must be >= 2");
  std::vector<Point> pts;
  for_each_offset(box.center, box.radius, [&](const Point& p) {
    const int r = point_distance(p, box.center);
    if (r > box.radius - 2) pts.push_back(p);
  });
  return pts;
}

BoxBoundary boundaries(const LatticeBox& box) {
  BoxBoundary b;
  for_each_offset(box.center, box.radius, [&](const Point& p) {
    if (point_distance(p, box.center) == box.radius) b.inner.push_back(p);
  });
  for_each_offset(box.center, box.radius + 1, [&](const Point& p) {
    if (point_distance(p, box.center) == box.radius + 1) b.outer.push_back(p);
  });
  for (const Point& x : b.inner)
    for (const Point& y : b.outer)
      if (point_distance(x, y) == 1) b.edges.emplace_back(x, y);
  return b;
}

int box_distance(const LatticeBox& a, const LatticeBox& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("box_distance: dimension mismatch");
  // per-axis gaps decouple for axis-aligned cubes under the max norm
  int d = 0;
  for (int i = 0; i < a.dim(); ++i) {
    const int gap = std::abs(a.center[i] - b.center[i]) - a.radius - b.radius;
    d = std::max(d, std::max(0, gap));
  }
  return d;
}

bool is_interactive(const LatticeBox& box, double range_r0) {
  if (box.particles != 2)
    throw std::invalid_argument("is_interactive: needs a two-particle box");
  if (range_r0 < 0) throw std::invalid_argument("is_interactive: range must be >= 0");
  return box_distance(box.factor(0), box.factor(1)) <= range_r0;
}

bool projections_disjoint(const LatticeBox& a, const LatticeBox& b) {
  std::vector<LatticeBox> pa, pb;
  for (int j = 0; j < a.particles; ++j) pa.push_back(a.particles == 2 ? a.factor(j) : a);
  for (int j = 0; j < b.particles; ++j) pb.push_back(b.particles == 2 ? b.factor(j) : b);
  for (const auto& x : pa)
    for (const auto& y : pb)
      if (box_distance(x, y) == 0) return false;
  return true;
}

int AnnularCover::width() const {
  int w = 0;
  for (const auto& [a, b] : shells) w += b - a;
  return w;
}

void AnnularCover::validate(int outer_radius) const {
  int prev = 0;
  for (const auto& [a, b] : shells) {
    if (a <= prev) throw std::invalid_argument("AnnularCover: radii must interleave strictly");
    if (b <= a) throw std::invalid_argument("AnnularCover: each shell needs a < b");
    prev = b;
  }
  if (prev >= outer_radius)
    throw std::invalid_argument("AnnularCover: outermost radius must stay below the box radius");
}

}  // namespace msalab
