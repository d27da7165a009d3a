#pragma once

// Rational piecewise-linear convex functions on a full-dimensional rational
// polytope, presented by a cell decomposition with one affine function per
// cell. Construction certifies convexity exactly (each cell's affine must
// dominate every other affine at the cell's vertices, the cells must tile the
// domain); invalid data raises domain_error("not semipositive").

#include <random>
#include <utility>
#include <vector>

#include "toric/polytope.hpp"

namespace toric {

struct PLCell {
  Polytope region;  // full-dimensional, contained in the domain
  RatVec slope;     // a
  Rat offset;       // c; the cell's value is <a, y> + c
};

class PLConvexFunction {
 public:
  PLConvexFunction(Polytope domain, std::vector<PLCell> cells);

  // max_k (<a_k, y> + c_k) with the cell structure induced by the maxima.
  // Affine functions that are nowhere maximal are dropped.
  static PLConvexFunction from_affines(
      const Polytope& domain, std::vector<std::pair<RatVec, Rat>> affines);

  static PLConvexFunction constant(const Polytope& domain, const Rat& c);

  const Polytope& domain() const { return domain_; }
  const std::vector<PLCell>& cells() const { return cells_; }
  int n() const { return domain_.ambient_dim(); }

  // Value of the convex function (the max of all cell affines; agrees with
  // the cell presentation on the domain).
  Rat value(const RatVec& y) const;
  double value_d(const std::vector<double>& y) const;

  Rat max_value() const;
  Rat min_value() const;
  Rat average() const;  // exact mean over the domain

  PLConvexFunction scaled(const Rat& d) const;       // d * f, d > 0
  PLConvexFunction translated(const Rat& c) const;   // f + c

  // Interior cell boundaries, ascending (one-dimensional domains only).
  std::vector<Rat> breakpoints() const;

 private:
  Polytope domain_;
  std::vector<PLCell> cells_;
};

// Convex PL sample with random rational affines: slopes and offsets have
// numerators in [-range, range] and denominators in [1, max_den].
PLConvexFunction random_convex_pl(const Polytope& domain, std::mt19937_64& rng,
                                  int affine_count, long long range = 3,
                                  long long max_den = 3);

}  // namespace toric
