#pragma once

#include <memory>
#include <string>
#include <vector>

#include "toric/moment.hpp"

namespace toric {

using VecD = std::vector<double>;
using MatD = std::vector<std::vector<double>>;

// Flat symmetric derivative tensors for dimensions 1 and 2.
struct Tens3 {
  int n = 0;
  std::vector<double> a;  // size n^3, index (i*n + j)*n + k
  double at(int i, int j, int k) const { return a[(i * n + j) * n + k]; }
};
struct Tens4 {
  int n = 0;
  std::vector<double> a;  // size n^4
  double at(int i, int j, int k, int l) const {
    return a[((i * n + j) * n + k) * n + l];
  }
};

// Smooth strictly convex potential on R^n with gradient image the interior of
// a moment polytope; both the primal (x-space) and Legendre (y-space) sides
// are exposed. Conjugate evaluations default to Newton solves on the primal
// oracle and may be overridden by closed forms.
class ToricPotential {
 public:
  virtual ~ToricPotential() = default;

  virtual const MomentPolytope& polytope() const = 0;
  int dim() const { return polytope().n(); }

  virtual double u(const VecD& x) const = 0;
  virtual VecD grad(const VecD& x) const = 0;
  virtual MatD hess(const VecD& x) const = 0;

  // log det D^2 u(x).  The default takes the log of the assembled
  // determinant; implementations whose hessian underflows far from the
  // transition region override this with a log-space formula.
  virtual double log_hess_det(const VecD& x) const;

  virtual bool has_higher_derivatives() const { return false; }
  virtual void third_fourth(const VecD& x, Tens3* t3, Tens4* t4) const;

  // x_u(y): the unique x with grad(x) = y, for y in the interior of P.
  virtual VecD x_of_y(const VecD& y) const;
  // Legendre transform u*(y) = <x_u(y), y> - u(x_u(y)).
  virtual double ustar(const VecD& y) const;

  // 1D only: interior y-values where Legendre-side data is non-smooth;
  // quadrature over the moment interval forces subdivision there.
  virtual std::vector<double> legendre_breaks() const { return {}; }

  virtual std::string describe() const = 0;
};

using PotentialPtr = std::shared_ptr<const ToricPotential>;

// u(x) = (1/(2m)) log sum_k exp(logw_k + 2 <e_k, x>), the general exponential
// sum potential. Exponents e_k are exact rational points (typically lattice
// points of m*P); moment polytope is conv(e_k)/m. All derivatives through
// fourth order are exact cumulant formulas.
class LsePotential : public ToricPotential {
 public:
  LsePotential(RatMat exponents, VecD log_weights, long long m = 1);

  // Weight-1 exponential sum over all lattice points of a lattice polytope.
  static std::shared_ptr<LsePotential> canonical_reference(
      const MomentPolytope& p);

  const MomentPolytope& polytope() const override { return p_; }
  double u(const VecD& x) const override;
  VecD grad(const VecD& x) const override;
  MatD hess(const VecD& x) const override;
  double log_hess_det(const VecD& x) const override;
  bool has_higher_derivatives() const override { return true; }
  void third_fourth(const VecD& x, Tens3* t3, Tens4* t4) const override;
  std::string describe() const override;

  const RatMat& exponents() const { return exps_; }
  const VecD& log_weights() const { return logw_; }
  long long scale() const { return m_; }

 private:
  RatMat exps_;
  std::vector<VecD> exps_d_;
  VecD logw_;
  long long m_;
  MomentPolytope p_;

  VecD softmax(const VecD& x) const;
};

// Base potential plus Gaussian bumps amp * exp(-|x - c|^2 / w^2). Derivatives
// are closed-form; convexity is verified on a sample grid at construction and
// failure raises domain_error("not convex").
class BumpPotential : public ToricPotential {
 public:
  struct Bump {
    double amp;
    VecD center;
    double width;
  };
  BumpPotential(PotentialPtr base, std::vector<Bump> bumps);

  const MomentPolytope& polytope() const override { return base_->polytope(); }
  double u(const VecD& x) const override;
  VecD grad(const VecD& x) const override;
  MatD hess(const VecD& x) const override;
  bool has_higher_derivatives() const override {
    return base_->has_higher_derivatives();
  }
  void third_fourth(const VecD& x, Tens3* t3, Tens4* t4) const override;
  std::string describe() const override;

 private:
  PotentialPtr base_;
  std::vector<Bump> bumps_;
};

// One-dimensional potential specified by Legendre-side samples: a natural
// cubic spline through (y_i, ustar_i). The primal side is recovered by
// inverting the strictly increasing derivative of the spline. Fails with
// domain_error("not convex") when the spline is not convex at the knots.
class GridPotential : public ToricPotential {
 public:
  GridPotential(VecD ys, VecD ustar_vals);

  const MomentPolytope& polytope() const override { return p_; }
  double u(const VecD& x) const override;
  VecD grad(const VecD& x) const override;
  MatD hess(const VecD& x) const override;
  VecD x_of_y(const VecD& y) const override;
  double ustar(const VecD& y) const override;
  std::string describe() const override;

  const VecD& knots() const { return ys_; }

  double spline_value(double y) const;
  double spline_d1(double y) const;
  double spline_d2(double y) const;

 private:
  VecD ys_, vals_, m2_;  // knots, values, spline second derivatives
  MomentPolytope p_;
  double y_of_x(double x) const;
};

// u + c (the Legendre transform shifts by -c).
class ShiftedPotential : public ToricPotential {
 public:
  ShiftedPotential(PotentialPtr base, double c) : base_(std::move(base)), c_(c) {}
  const MomentPolytope& polytope() const override { return base_->polytope(); }
  double u(const VecD& x) const override { return base_->u(x) + c_; }
  VecD grad(const VecD& x) const override { return base_->grad(x); }
  MatD hess(const VecD& x) const override { return base_->hess(x); }
  bool has_higher_derivatives() const override {
    return base_->has_higher_derivatives();
  }
  void third_fourth(const VecD& x, Tens3* t3, Tens4* t4) const override {
    base_->third_fourth(x, t3, t4);
  }
  double log_hess_det(const VecD& x) const override {
    return base_->log_hess_det(x);
  }
  VecD x_of_y(const VecD& y) const override { return base_->x_of_y(y); }
  double ustar(const VecD& y) const override { return base_->ustar(y) - c_; }
  std::vector<double> legendre_breaks() const override {
    return base_->legendre_breaks();
  }
  std::string describe() const override;

 private:
  PotentialPtr base_;
  double c_;
};

}  // namespace toric
