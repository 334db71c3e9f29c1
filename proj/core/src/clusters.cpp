#include "msalab/clusters.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "msalab/classify.hpp"

namespace msalab {

LatticeBox ClusterBox::box(int dim_per_particle, int particles) const {
  return LatticeBox{center, radius, dim_per_particle, particles};
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }

  std::size_t find(std::size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }

  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Cubic box around a member set: per-axis floor-midpoint center, radius the
// largest half-extent plus the l margin. Contains B_l(v) for every member v.
ClusterBox bound_members(std::vector<Point> members, int ell) {
  const std::size_t dims = members.front().size();
  Point lo = members.front(), hi = members.front();
  for (const Point& p : members) {
    for (std::size_t a = 0; a < dims; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  Point center(dims, 0);
  int half = 0;
  for (std::size_t a = 0; a < dims; ++a) {
    const int extent = hi[a] - lo[a];
    center[a] = lo[a] + extent / 2;
    half = std::max(half, (extent + 1) / 2);
  }
  std::sort(members.begin(), members.end());
  return ClusterBox{std::move(center), half + ell, std::move(members)};
}

// Maximum number of pairwise min_sep-separated points. Lexicographic greedy is
// exact in one dimension; in higher dimensions it is a lower bound, so small
// sets get an exact branch-and-bound pass instead.
int disjoint_family_size(std::vector<Point> pts, int min_sep) {
  if (pts.empty()) return 0;
  std::sort(pts.begin(), pts.end());

  const bool exact_search = pts.front().size() > 1 && pts.size() <= 20;
  if (!exact_search) {
    std::vector<Point> picked;
    for (const Point& p : pts) {
      bool ok = true;
      for (const Point& q : picked) {
        if (point_distance(p, q) < min_sep) { ok = false; break; }
      }
      if (ok) picked.push_back(p);
    }
    return static_cast<int>(picked.size());
  }

  int best = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (static_cast<int>(chosen.size() + (pts.size() - i)) <= best) return;
    if (i == pts.size()) {
      best = std::max(best, static_cast<int>(chosen.size()));
      return;
    }
    bool ok = true;
    for (std::size_t j : chosen) {
      if (point_distance(pts[j], pts[i]) < min_sep) { ok = false; break; }
    }
    if (ok) {
      chosen.push_back(i);
      rec(i + 1);
      chosen.pop_back();
    }
    rec(i + 1);
  };
  rec(0);
  return best;
}

}  // namespace

ClusterDecomposition build_singular_clusters(const std::vector<Point>& singular_centers,
                                             const LatticeBox& big_box, int ell, int budget) {
  if (ell < 1 || ell >= big_box.radius) {
    throw std::invalid_argument("build_singular_clusters: need 1 <= l < big box radius");
  }
  if (budget < 1) throw std::invalid_argument("build_singular_clusters: budget must be positive");
  const int reach = big_box.radius - ell;
  for (const Point& v : singular_centers) {
    if (static_cast<int>(v.size()) != big_box.dim() || point_distance(v, big_box.center) > reach) {
      throw std::invalid_argument("build_singular_clusters: center " + format_point(v) +
                                  " is not an interior sub-box center");
    }
  }

  ClusterDecomposition out;
  out.ell = ell;
  if (singular_centers.empty()) return out;

  // Chain stage: transitively group centers within 3l of each other.
  UnionFind uf(singular_centers.size());
  for (std::size_t i = 0; i < singular_centers.size(); ++i) {
    for (std::size_t j = i + 1; j < singular_centers.size(); ++j) {
      if (point_distance(singular_centers[i], singular_centers[j]) <= 3 * ell) uf.unite(i, j);
    }
  }
  std::vector<std::vector<Point>> groups;
  {
    std::vector<std::size_t> root_of(singular_centers.size());
    for (std::size_t i = 0; i < singular_centers.size(); ++i) root_of[i] = uf.find(i);
    std::vector<std::size_t> roots(root_of);
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    groups.resize(roots.size());
    for (std::size_t i = 0; i < singular_centers.size(); ++i) {
      const auto g = std::lower_bound(roots.begin(), roots.end(), root_of[i]) - roots.begin();
      groups[static_cast<std::size_t>(g)].push_back(singular_centers[i]);
    }
  }

  // Box each chain, then keep merging boxes that touch or come within one
  // step of each other. Rebounding from the pooled members keeps boxes tight;
  // the loop ends with pairwise gaps >= 2, so nothing singular can sit
  // adjacent to a final cluster boundary without having been absorbed.
  std::vector<ClusterBox> clusters;
  clusters.reserve(groups.size());
  for (auto& g : groups) clusters.push_back(bound_members(std::move(g), ell));
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
        const LatticeBox bi = clusters[i].box(big_box.dim_per_particle, big_box.particles);
        const LatticeBox bj = clusters[j].box(big_box.dim_per_particle, big_box.particles);
        if (box_distance(bi, bj) <= 1) {
          std::vector<Point> pooled(clusters[i].members);
          pooled.insert(pooled.end(), clusters[j].members.begin(), clusters[j].members.end());
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          clusters[i] = bound_members(std::move(pooled), ell);
          merged = true;
        }
      }
    }
  }
  std::sort(clusters.begin(), clusters.end(),
            [](const ClusterBox& a, const ClusterBox& b) { return a.center < b.center; });
  out.clusters = std::move(clusters);

  // Annular cover around the big box's center: one radial band per cluster,
  // clamped inside the box, overlapping bands coalesced.
  std::vector<std::pair<int, int>> bands;
  for (const ClusterBox& c : out.clusters) {
    const int dist = point_distance(c.center, big_box.center);
    if (dist <= c.radius) out.center_covered = true;
    const int a = std::max(1, dist - c.radius);
    const int b = std::min(big_box.radius - 1, dist + c.radius);
    if (a < b) bands.emplace_back(a, b);
  }
  std::sort(bands.begin(), bands.end());
  for (const auto& band : bands) {
    if (!out.cover.shells.empty() && band.first <= out.cover.shells.back().second) {
      out.cover.shells.back().second = std::max(out.cover.shells.back().second, band.second);
    } else {
      out.cover.shells.push_back(band);
    }
  }
  if (!out.cover.shells.empty()) out.cover.validate(big_box.radius);

  out.disjoint_count = disjoint_family_size(singular_centers, 2 * ell + 1);
  out.budget_exceeded = out.disjoint_count > budget;
  out.width_exceeded = out.cover.width() > 2 * budget * ell;
  return out;
}

ClusterDecomposition scan_singular_subboxes(RealizationLab& lab, const LatticeBox& big_box,
                                            int ell, double energy, double mass, int budget) {
  if (ell < 1 || ell >= big_box.radius) {
    throw std::invalid_argument("scan_singular_subboxes: need 1 <= l < big box radius");
  }
  const LatticeBox interior{big_box.center, big_box.radius - ell, big_box.dim_per_particle,
                            big_box.particles};
  std::vector<Point> singular;
  for (const Point& v : lattice_points(interior)) {
    const LatticeBox sub{v, ell, big_box.dim_per_particle, big_box.particles};
    if (classify_singular(lab, sub, energy, mass).singular) singular.push_back(v);
  }
  return build_singular_clusters(singular, big_box, ell, budget);
}

}  // namespace msalab
