#pragma once

#include <functional>
#include <vector>

namespace toric {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evals = 0;
};

using Fn1 = std::function<double(double)>;
using Fn2 = std::function<double(double, double)>;

// Adaptive Gauss-Kronrod 7-15 on [a, b]. Splits the worst interval until the
// accumulated error estimate meets max(abs_tol, rel_tol * |value|) or the
// interval budget is exhausted.
QuadResult integrate(const Fn1& f, double a, double b, double rel_tol = 1e-10,
                     double abs_tol = 1e-13, std::size_t max_intervals = 4000);

// As above but with forced subdivision at the given interior points (kinks).
QuadResult integrate_with_breaks(const Fn1& f, double a, double b,
                                 const std::vector<double>& breaks,
                                 double rel_tol = 1e-10,
                                 double abs_tol = 1e-13,
                                 std::size_t max_intervals = 4000);

// Integral over the whole real line of a rapidly decaying integrand: expands
// symmetric windows around `center` until the added contribution is
// negligible relative to the accumulated value.
QuadResult integrate_real_line(const Fn1& f, double center,
                               double initial_halfwidth = 4.0,
                               double rel_tol = 1e-11);

// Gauss-Legendre nodes and weights on [-1, 1] (cached per order).
const std::vector<std::pair<double, double>>& gauss_legendre(int order);

// Quadrature over a convex polygon given by a CCW vertex cycle: centroid fan
// triangulation, tensor Gauss-Legendre of the given order per triangle with
// one uniform refinement level used for the error estimate.
QuadResult integrate_polygon(const Fn2& f,
                             const std::vector<std::pair<double, double>>& ccw,
                             int order = 24, int refine = 1);

}  // namespace toric
