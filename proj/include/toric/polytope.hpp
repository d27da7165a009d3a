#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "toric/linalg.hpp"
#include "toric/rational.hpp"

namespace toric {

// Inward facet inequality <normal, x> >= rhs with primitive integer normal.
struct Facet {
  IntVec normal;
  Rat rhs;
};

// Exact rational convex polytope in ambient dimension <= 3. Supports lower
// dimensional polytopes (points, segments, polygons in space); volumes inside
// the affine hull are normalized by the induced integer lattice.
class Polytope {
 public:
  Polytope() = default;

  // Convex hull of a point set; throws input_error("empty polytope") when the
  // list is empty.
  static Polytope hull(int ambient, std::vector<RatVec> points);

  int ambient_dim() const { return amb_; }
  int dim() const { return dim_; }

  // Irredundant vertex list in a canonical deterministic order (a CCW cycle
  // for polygons). Computed lazily for 3-dimensional hulls.
  const std::vector<RatVec>& vertices() const;

  // Lebesgue volume in the ambient space (0 when dim() < ambient_dim()).
  Rat volume() const;

  // Volume inside the affine hull, normalized so a fundamental cell of the
  // induced integer lattice has volume 1; a point has volume 1 by convention.
  Rat volume_in_hull() const { return vol_hull_; }

  RatVec centroid() const { return centroid_; }

  // Facet inequalities in ambient coordinates (full-dimensional case only).
  const std::vector<Facet>& facets() const;

  // Facets as polytopes (any dimension >= 1), aligned with facet_normals().
  std::vector<Polytope> facet_polytopes() const;

  // Primitive inward facet normals expressed in ambient coordinates when the
  // polytope is full-dimensional; aligned with facet_polytopes().
  std::vector<Facet> ambient_facets_or_throw() const { return facets(); }

  bool contains(const RatVec& p) const;

  // max over the polytope of <w, x>.
  Rat support(const RatVec& w) const;

  static Polytope minkowski_sum(const Polytope& a, const Polytope& b);

 private:
  int amb_ = 0;
  int dim_ = -1;
  std::vector<RatVec> pts_;            // distinct input points
  RatVec p0_;                          // base point of the affine hull
  std::vector<IntVec> lat_basis_;      // Z-basis of lattice of hull directions
  std::vector<RatVec> corner_coords_;  // hull corner points, lattice coords
  mutable std::vector<RatVec> verts_;  // irredundant ambient vertices (lazy)
  mutable bool verts_ready_ = false;
  std::vector<Facet> coord_facets_;    // facets in lattice coordinates
  std::vector<Facet> facets_;          // ambient facets (full-dim only)
  Rat vol_hull_{0};
  RatVec centroid_;

  std::optional<RatVec> coords_of(const RatVec& p) const;
  RatVec from_coords(const RatVec& c) const;
  void build_from_coords(std::vector<RatVec> coord_pts);
  friend Rat mixed_volume(const std::vector<Polytope>& qs);
};

// Mixed volume of n polytopes in ambient dimension n, normalized so that
// mixed_volume(Q, ..., Q) = volume(Q). Exact inclusion-exclusion over
// Minkowski sums of subsets.
Rat mixed_volume(const std::vector<Polytope>& qs);

// True iff every vertex of inner lies in outer (exact).
bool polytope_contains(const Polytope& outer, const Polytope& inner);

// Sum of lattice-normalized facet volumes (the boundary lattice measure).
Rat lattice_boundary_volume(const Polytope& p);

// Clips a CCW polygon by the halfplane <nu, x> >= rhs (exact; may be empty).
std::vector<RatVec> clip_polygon(const std::vector<RatVec>& poly,
                                 const RatVec& nu, const Rat& rhs);

// Intersection of the segment p + t (q - p), t in [0,1], with a full
// dimensional polytope; empty when the intersection has measure zero.
struct SegmentClip {
  bool nonempty = false;
  Rat t0{0}, t1{0};
};
SegmentClip clip_segment(const Polytope& cell, const RatVec& p,
                         const RatVec& q);

}  // namespace toric
