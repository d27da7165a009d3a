#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>

#include "toric/archimedean.hpp"
#include "toric/potential.hpp"

using namespace toric;
using doctest::Approx;

namespace {

MomentPolytope interval(long long a, long long b) {
  return MomentPolytope(Polytope::hull(1, {{Rat(a)}, {Rat(b)}}));
}

PotentialPtr fs01() {
  return LsePotential::canonical_reference(interval(0, 1));
}

// Degree-2 potential with the constant-curvature weights (1, 2, 1).
PotentialPtr fano_reference() {
  RatMat exps{{rat(0)}, {rat(1)}, {rat(2)}};
  return std::make_shared<LsePotential>(exps,
                                        VecD{0.0, std::log(2.0), 0.0}, 1);
}

PotentialPtr square_reference() {
  std::vector<RatVec> corners{{rat(0), rat(0)}, {rat(1), rat(0)},
                              {rat(0), rat(1)}, {rat(1), rat(1)}};
  return LsePotential::canonical_reference(
      MomentPolytope(Polytope::hull(2, corners)));
}

}  // namespace

TEST_CASE("logistic potential: closed-form conjugate and curvature") {
  auto ref = fs01();
  double y = 1.0 / 3.0;
  double expect = 0.5 * (y * std::log(y) + (1 - y) * std::log(1 - y));
  CHECK(ref->ustar({y}) == Approx(expect).epsilon(1e-12));
  CHECK(ref->x_of_y({y})[0] == Approx(0.5 * std::log(0.5)).epsilon(1e-10));
  CHECK(FunctionalEngine::scalar_curvature(*ref, {0.37}) ==
        Approx(2.0).epsilon(1e-10));
  CHECK(to_double(ref->polytope().sbar()) == Approx(2.0));
}

TEST_CASE("all functionals vanish when both arguments coincide") {
  auto ref = fs01();
  FunctionalEngine eng(ref, ref);
  auto r = eng.report();
  CHECK(r.energy == Approx(0.0).epsilon(1e-10));
  CHECK(r.j_norm == Approx(0.0).epsilon(1e-10));
  CHECK(r.i_norm == Approx(0.0).epsilon(1e-10));
  CHECK(r.entropy == Approx(0.0).epsilon(1e-10));
  CHECK(r.ricci_energy == Approx(0.0).epsilon(1e-10));
  CHECK(r.mabuchi == Approx(0.0).epsilon(1e-10));
}

TEST_CASE("translation laws: E shifts, J/I/H/M invariant, R picks -sbar c") {
  auto ref = fs01();
  double c = 0.7;
  auto shifted = std::make_shared<ShiftedPotential>(ref, c);
  FunctionalEngine eng(shifted, ref);
  CHECK(eng.energy() == Approx(c).epsilon(1e-9));
  CHECK(eng.j_norm() == Approx(0.0).epsilon(1e-9));
  CHECK(eng.i_norm() == Approx(0.0).epsilon(1e-9));
  CHECK(eng.entropy() == Approx(0.0).epsilon(1e-9));
  CHECK(eng.ricci_energy() == Approx(-2.0 * c).epsilon(1e-8));
  CHECK(eng.mabuchi() == Approx(0.0).epsilon(1e-8));
}

TEST_CASE("bumped metric: positivity, forced I = 2J, twisted identity") {
  auto ref = fs01();
  auto u = std::make_shared<BumpPotential>(
      ref, std::vector<BumpPotential::Bump>{{0.05, {0.2}, 1.0}});
  FunctionalEngine eng(u, ref);
  auto r = eng.report();
  CHECK(r.j_norm > 0.0);
  CHECK(r.i_norm > 0.0);
  CHECK(r.entropy > 0.0);
  CHECK(std::fabs(r.i_norm - 2.0 * r.j_norm) <=
        1e-8 * std::max(1.0, r.i_norm));
  // Twisting by the reference form itself reproduces J + E in one dimension.
  CHECK(eng.twisted_energy(*ref) == Approx(r.j_norm + r.energy).epsilon(1e-8));
  // Mabuchi is translation invariant.
  auto uc = std::make_shared<ShiftedPotential>(u, -0.3);
  FunctionalEngine engc(uc, ref);
  CHECK(engc.mabuchi() == Approx(r.mabuchi).epsilon(1e-7));
}

TEST_CASE("variational identities against central finite differences") {
  auto ref = fs01();
  std::vector<BumpPotential::Bump> w{{0.04, {-0.3}, 0.9}};
  auto c1 = energy_variation_check(ref, ref, w, 1e-4);
  CHECK(c1.finite_difference == Approx(c1.pairing).epsilon(1e-6));

  auto base = std::make_shared<BumpPotential>(
      ref, std::vector<BumpPotential::Bump>{{0.06, {0.4}, 1.3}});
  auto c2 = energy_variation_check(base, ref, w, 1e-4);
  CHECK(std::fabs(c2.finite_difference - c2.pairing) < 1e-6);

  auto c3 = mabuchi_variation_check(base, ref, w, 1e-4);
  CHECK(std::fabs(c3.finite_difference - c3.pairing) < 1e-5);
}

TEST_CASE("degree-two reference is constant curvature and Einstein") {
  auto ke = fano_reference();
  CHECK(to_double(ke->polytope().sbar()) == Approx(1.0));
  CHECK(FunctionalEngine::scalar_curvature(*ke, {0.8}) ==
        Approx(1.0).epsilon(1e-10));
  auto d = ding_functionals(ke, ke);
  CHECK(d.l_part == Approx(0.0).epsilon(1e-10));
  CHECK(d.ding == Approx(0.0).epsilon(1e-10));
}

TEST_CASE("Ding functional comparisons near the Einstein point") {
  auto ke = fano_reference();
  for (double amp : {0.03, -0.04, 0.08}) {
    auto u = std::make_shared<BumpPotential>(
        ke, std::vector<BumpPotential::Bump>{{amp, {0.5}, 1.1}});
    FunctionalEngine eng(u, ke);
    auto d = ding_functionals(u, ke);
    double m = eng.mabuchi();
    double j = eng.j_norm();
    CHECK(d.ding <= m + 1e-8);
    CHECK(d.ding <= j + 1e-8);
  }
}

TEST_CASE("Ding functional requires an anticanonical polytope") {
  auto ref = fs01();
  CHECK_THROWS_AS(ding_functionals(ref, ref), domain_error);
}

TEST_CASE("product reference on the unit square") {
  auto ref = square_reference();
  CHECK(to_double(ref->polytope().sbar()) == Approx(4.0));
  CHECK(FunctionalEngine::scalar_curvature(*ref, {0.3, -0.6}) ==
        Approx(4.0).epsilon(1e-9));

  double c = 0.4;
  auto shifted = std::make_shared<ShiftedPotential>(ref, c);
  FunctionalEngine eng(shifted, ref);
  CHECK(eng.energy() == Approx(c).epsilon(1e-7));
  CHECK(eng.j_norm() == Approx(0.0).epsilon(1e-7));
  CHECK(eng.ricci_energy() == Approx(-4.0 * c).epsilon(1e-6));
  CHECK(eng.mabuchi() == Approx(0.0).epsilon(1e-6));
}

TEST_CASE("two-dimensional bump: comparison chain between I and J") {
  auto ref = square_reference();
  auto u = std::make_shared<BumpPotential>(
      ref, std::vector<BumpPotential::Bump>{{0.05, {0.1, -0.2}, 1.2}});
  FunctionalEngine eng(u, ref);
  double i = eng.i_norm(), j = eng.j_norm();
  CHECK(j > 0.0);
  CHECK(i - j >= 0.5 * j - 1e-7);
  CHECK(i - j <= 2.0 * j + 1e-7);
}

TEST_CASE("spline-sampled potential reproduces the logistic model") {
  auto ref = fs01();
  int k = 41;
  VecD ys, vals;
  for (int i = 0; i < k; ++i) {
    // Cosine-clustered interior knots resolve the endpoint singularities.
    double t = 0.5 - 0.5 * std::cos(M_PI * (i + 0.5) / k);
    ys.push_back(t);
    vals.push_back(ref->ustar({t}));
  }
  auto grid = std::make_shared<GridPotential>(ys, vals);
  double y = 0.41;
  CHECK(grid->ustar({y}) == Approx(ref->ustar({y})).epsilon(1e-6));
  CHECK(grid->x_of_y({y})[0] == Approx(ref->x_of_y({y})[0]).epsilon(1e-4));
  double x = 0.3;
  CHECK(grid->u({x}) == Approx(ref->u({x})).epsilon(1e-5));
}

TEST_CASE("curvature bound audit for exponential-sum metrics") {
  auto ref = fs01();
  CHECK(ricci_bound_violation(*ref, 1, 8.0, 400) == Approx(0.0));
  // A degree-two family member on [0,1]: exponents {0, 1/2, 1} at scale 2.
  RatMat exps{{rat(0)}, {rat(1)}, {rat(2)}};
  auto u2 = std::make_shared<LsePotential>(exps, VecD{0.0, -2.0, 0.0}, 2);
  CHECK(u2->polytope().poly().vertices() == ref->polytope().poly().vertices());
  CHECK(ricci_bound_violation(*u2, 2, 8.0, 400) == Approx(0.0));
  // Its pointwise curvature does exceed the naive lattice-count constant.
  double s_mid = FunctionalEngine::scalar_curvature(*u2, {0.0});
  CHECK(s_mid > 3.0);
}

TEST_CASE("difference sup bounds the J difference") {
  auto ref = fs01();
  auto a = std::make_shared<BumpPotential>(
      ref, std::vector<BumpPotential::Bump>{{0.05, {0.3}, 1.0}});
  auto b = std::make_shared<BumpPotential>(
      ref, std::vector<BumpPotential::Bump>{{-0.03, {-0.5}, 0.8}});
  FunctionalEngine ea(a, ref), eb(b, ref);
  double dj = std::fabs(ea.j_norm() - eb.j_norm());
  double sup = sup_difference(*a, *b, 12.0, 2001);
  CHECK(dj <= 2.0 * sup + 1e-9);
}

TEST_CASE("shift inequalities bound J and M by the uniform distance") {
  auto ref = fs01();

  ShiftInequalityReport same = shift_inequality_check(ref, ref);
  CHECK(same.sup_diff == Approx(0.0));
  CHECK(same.j_diff == Approx(0.0));
  CHECK(same.ok);
  // Ricci form of the degree-one reference equals twice its metric.
  CHECK(same.ricci_constant == Approx(2.0).epsilon(1e-6));

  auto shifted = std::make_shared<ShiftedPotential>(ref, 0.4);
  ShiftInequalityReport rep = shift_inequality_check(shifted, ref);
  CHECK(rep.sup_diff == Approx(0.4).epsilon(1e-12));
  CHECK(rep.j_diff < 1e-9);
  CHECK(rep.j_bound == Approx(0.8).epsilon(1e-12));
  CHECK(rep.m_drop == Approx(0.0).epsilon(1e-8));
  CHECK(rep.m_bound == Approx(-1.6).epsilon(1e-3));
  CHECK(rep.ok);

  auto a = std::make_shared<BumpPotential>(
      ref, std::vector<BumpPotential::Bump>{{0.05, {0.3}, 1.0}});
  auto b = std::make_shared<BumpPotential>(
      ref, std::vector<BumpPotential::Bump>{{-0.03, {-0.5}, 0.8}});
  ShiftInequalityReport ab = shift_inequality_check(a, b);
  CHECK(ab.sup_diff > 0.02);
  CHECK(ab.j_diff <= ab.j_bound + 1e-9);
  CHECK(ab.m_drop >= ab.m_bound - 1e-9);
  CHECK(ab.ok);

  // The round degree-two metric (binomial weights) has Ricci form equal to
  // its metric; the weight-1 reference on the same interval does not.
  RatMat exps2{{rat(0)}, {rat(1)}, {rat(2)}};
  auto round_pot = std::make_shared<LsePotential>(
      exps2, VecD{0.0, std::log(2.0), 0.0}, 1);
  ShiftInequalityReport round = shift_inequality_check(round_pot, round_pot);
  CHECK(round.ricci_constant == Approx(1.0).epsilon(1e-6));
  auto flat_weights = LsePotential::canonical_reference(
      MomentPolytope(interval(0, 2)));
  ShiftInequalityReport nonround =
      shift_inequality_check(flat_weights, flat_weights);
  CHECK(nonround.ricci_constant > 1.2);

  auto other = LsePotential::canonical_reference(
      MomentPolytope(interval(0, 3)));
  CHECK_THROWS_WITH_AS(shift_inequality_check(ref, other),
                       "potentials live on different moment polytopes",
                       input_error);
}
