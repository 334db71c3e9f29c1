#pragma once

#include <vector>

#include "msalab/geometry.hpp"
#include "msalab/lab.hpp"

namespace msalab {

// Axis-aligned box enclosing one maximal chain of singular l-boxes, with an l
// margin so every member box lies strictly inside. members are the singular
// sub-box centers absorbed into the chain.
struct ClusterBox {
  Point center;
  int radius = 0;
  std::vector<Point> members;

  LatticeBox box(int dim_per_particle, int particles) const;
};

// Boxed singular clusters of a big box at sub-scale l, plus the annular cover
// around the big box's center. Signals rather than errors: a decomposition
// that breaks the descent hypotheses is still returned, flagged degenerate,
// and the caller counts it toward the singular event.
struct ClusterDecomposition {
  int ell = 0;
  std::vector<ClusterBox> clusters;
  AnnularCover cover;
  int disjoint_count = 0;      // max pairwise-disjoint singular l-boxes (exact for d=1 or <=20 centers)
  bool budget_exceeded = false;  // disjoint_count > budget
  bool width_exceeded = false;   // cover width > 2 * budget * l
  bool center_covered = false;   // big box center inside some cluster box

  bool degenerate() const { return budget_exceeded || width_exceeded || center_covered; }
};

// Deterministic chain construction from a precomputed singular-center list:
// union centers within 3l, box each chain (midpoint center, half-extent + l
// radius), then merge cluster boxes until all pairs are >= 2 apart. The
// resulting boxes are pairwise non-overlapping, contain every singular l-box,
// and no singular l-box sits adjacent to a cluster boundary.
ClusterDecomposition build_singular_clusters(const std::vector<Point>& singular_centers,
                                             const LatticeBox& big_box, int ell, int budget);

// Classifies every l-sub-box of big_box at the given energy and feeds the
// singular centers to build_singular_clusters.
ClusterDecomposition scan_singular_subboxes(RealizationLab& lab, const LatticeBox& big_box,
                                            int ell, double energy, double mass, int budget);

}  // namespace msalab
