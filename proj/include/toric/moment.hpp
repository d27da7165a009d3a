#pragma once

#include <optional>
#include <vector>

#include "toric/polytope.hpp"

namespace toric {

// A full-dimensional rational polytope P in R^n together with the toric data
// used throughout: normalized degree V = n! vol(P), the mean scalar curvature
// sbar = sigma(dP)/vol(P) (boundary lattice measure over volume), vertex cones
// of the normal fan, and the log-discrepancy function on fan weights.
class MomentPolytope {
 public:
  explicit MomentPolytope(Polytope p);

  const Polytope& poly() const { return p_; }
  int n() const { return p_.ambient_dim(); }
  Rat vol() const { return p_.volume(); }
  Rat degree() const;  // n! vol(P)
  Rat sbar() const;    // boundary lattice measure / volume

  bool is_lattice() const;
  std::vector<RatVec> lattice_points() const;  // P ∩ Z^n, lex order

  // True iff every vertex cone of the normal fan is unimodular.
  bool fan_is_smooth() const;

  // Log discrepancy of the toric valuation with weight w: expand w over the
  // primitive inward facet normals at the vertex whose cone contains w and
  // sum the coefficients. Throws domain_error("non-smooth cone") when the
  // normal fan is not unimodular.
  Rat log_discrepancy(const RatVec& w) const;

  // As above for the product fan (fan of P) x (half line): weight (w, t) with
  // t >= 0; used for valuations on the product family.
  Rat log_discrepancy_product(const RatVec& w, const Rat& t) const;

  // Lattice translate t with <nu_F, t> = rhs_F + 1 for every facet, i.e.
  // P - t is reflexive; nullopt when no such lattice point exists.
  std::optional<RatVec> reflexive_translate() const;

  // P scaled by a positive integer.
  MomentPolytope dilate(long long k) const;

 private:
  Polytope p_;
  struct VertexCone {
    RatMat inv;  // inverse of the matrix with the facet normals as columns
  };
  mutable std::vector<VertexCone> cones_;
  mutable bool cones_ready_ = false;
  mutable bool smooth_ = false;
  void build_cones() const;
};

}  // namespace toric
