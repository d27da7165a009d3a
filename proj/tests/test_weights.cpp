#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "toric/archimedean.hpp"
#include "toric/gitweights.hpp"
#include "toric/naconfig.hpp"
#include "toric/pl.hpp"
#include "toric/rays.hpp"

using namespace toric;
using doctest::Approx;

namespace {

WeightedVector wv(std::initializer_list<std::initializer_list<long long>> ws,
                  std::initializer_list<double> ns) {
  std::vector<IntVec> weights;
  for (auto& m : ws) {
    IntVec row;
    for (long long e : m) row.emplace_back(e);
    weights.push_back(std::move(row));
  }
  return WeightedVector(std::move(weights), VecD(ns));
}

// f = log||g.v|| - log||g.w||
LogNormFunction difference(const WeightedVector& v, const WeightedVector& w) {
  return LogNormFunction{{{Rat(1), v}, {Rat(-1), w}}};
}

Polytope interval(long long a, long long b) {
  return Polytope::hull(1, {{Rat(a)}, {Rat(b)}});
}

// Single weight holding the total Bergman weight of a ray direction, scaled
// so its exact slope reproduces the configuration energy.
LogNormTerm energy_term(const MomentPolytope& P, const PLConvexFunction& f,
                        const Rat& sign) {
  BergmanData bd = bergman_data(P, calibrate_direction(P, f));
  Rat total = 0;
  for (const Rat& wk : bd.w) total += wk;
  Int n = static_cast<long long>(bd.w.size());
  Rat coeff = sign / (Rat(bd.k0) * Rat(bd.m) * Rat(n));
  return {coeff, WeightedVector({IntVec{num(total)}}, {1.0})};
}

}  // namespace

TEST_CASE("weighted vectors validate their data and cache the hull") {
  WeightedVector v = wv({{-1}, {1}}, {1.0, 2.0});
  CHECK(v.rank() == 1);
  CHECK(v.components() == 2);
  CHECK(v.weight_polytope().vertices().size() == 2);
  CHECK(v.weight_polytope().vertices()[0][0] == Rat(-1));
  CHECK(v.weight_polytope().vertices()[1][0] == Rat(1));

  CHECK_THROWS_WITH_AS(WeightedVector({}, {}), "empty weight list",
                       input_error);
  CHECK_THROWS_WITH_AS(wv({{1}}, {1.0, 2.0}), "weights and norms must align",
                       input_error);
  CHECK_THROWS_WITH_AS(wv({{1}}, {-1.0}), "component norms must be positive",
                       input_error);
  CHECK_THROWS_WITH_AS(wv({{1}, {1, 2}}, {1.0, 1.0}),
                       "weight entries have mismatched rank", input_error);
}

TEST_CASE("support function takes the max pairing over the weights") {
  WeightedVector v = wv({{1}, {-1}}, {1.0, 1.0});
  CHECK(support_function(v, {Rat(3)}) == Rat(3));
  CHECK(support_function(v, {Rat(0)}) == Rat(0));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 10; ++t) {
    RatVec lam{Rat(static_cast<long long>(rng() % 11) - 5,
                   static_cast<long long>(rng() % 3) + 1)};
    CHECK(support_function(v, {Rat(2) * lam[0]}) ==
          Rat(2) * support_function(v, lam));
  }
  CHECK_THROWS_AS(support_function(v, {Rat(1), Rat(0)}), input_error);
}

TEST_CASE("tensor products add characters and merge repeated ones") {
  WeightedVector v = wv({{0}, {1}}, {1.0, 2.0});
  WeightedVector vv = v.tensor(v);
  REQUIRE(vv.components() == 3);
  CHECK(vv.weights()[0][0] == 0);
  CHECK(vv.weights()[1][0] == 1);
  CHECK(vv.weights()[2][0] == 2);
  CHECK(vv.norms()[0] == Approx(1.0));
  CHECK(vv.norms()[1] == Approx(2.0 * std::sqrt(2.0)));
  CHECK(vv.norms()[2] == Approx(4.0));

  WeightedVector triv = v.power(0);
  CHECK(triv.components() == 1);
  CHECK(triv.weights()[0][0] == 0);
  CHECK(triv.norms()[0] == Approx(1.0));
  CHECK(v.power(2).weights() == vv.weights());

  // min pairing is additive across tensor factors.
  WeightedVector u = wv({{-2}, {3}}, {1.0, 1.0});
  for (long long l : {-2LL, 1LL, 3LL}) {
    RatVec lam{Rat(l)};
    CHECK(v.tensor(u).min_pairing(lam) ==
          v.min_pairing(lam) + u.min_pairing(lam));
  }
}

TEST_CASE("exact slopes on one-parameter subgroups") {
  WeightedVector v = wv({{1}}, {1.0});
  WeightedVector w = wv({{-1}}, {1.0});
  CHECK(fNA(difference(v, w), cochar({1})) == Rat(-2));

  LogNormFunction same = difference(v, v);
  for (long long l : {-3LL, 0LL, 1LL, 7LL})
    CHECK(fNA(same, cochar({l})) == Rat(0));

  WeightedVector v2 = wv({{-1}, {1}}, {1.0, 1.0});
  WeightedVector w2 = wv({{1}}, {1.0});
  CHECK(fNA(difference(v2, w2), cochar({1})) == Rat(2));
  CHECK(fNA(difference(v2, w2), cochar({-1})) == Rat(0));

  CHECK(fNA(LogNormFunction{}, cochar({5})) == Rat(0));
  CHECK(fNA(difference(v, w), cochar({0})) == Rat(0));

  // Positive homogeneity and additivity in the terms, exact.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    auto rnd = [&](long long span) {
      return static_cast<long long>(rng() % (2 * span + 1)) - span;
    };
    WeightedVector a = wv({{rnd(2), rnd(2)}, {rnd(2), rnd(2)}}, {1.0, 1.5});
    WeightedVector b = wv({{rnd(2), rnd(2)}}, {0.7});
    OneParamSubgroup lam = cochar({rnd(3), rnd(3)});
    OneParamSubgroup lam3 = cochar({0, 0});
    lam3[0] = lam[0] * 3;
    lam3[1] = lam[1] * 3;
    LogNormFunction fa{{{Rat(1, 2), a}}};
    LogNormFunction fb{{{Rat(-2), b}}};
    LogNormFunction fab{{{Rat(1, 2), a}, {Rat(-2), b}}};
    CHECK(fNA(fab, lam) == fNA(fa, lam) + fNA(fb, lam));
    CHECK(fNA(fab, lam3) == Rat(3) * fNA(fab, lam));
  }
}

TEST_CASE("numeric slope of the rescaled evaluation matches the exact one") {
  WeightedVector v = wv({{1}}, {1.0});
  WeightedVector w = wv({{-1}}, {1.0});
  SlopeAgreement sl = slope_vs_fNA(difference(v, w), cochar({1}));
  CHECK(sl.exact == Rat(-2));
  CHECK(sl.slope == Approx(-2.0).epsilon(1e-3));
  CHECK(sl.pass);

  SlopeAgreement zero = slope_vs_fNA(difference(v, v), cochar({4}));
  CHECK(std::abs(zero.slope) <= 1e-6);
  CHECK(zero.pass);

  std::mt19937_64 rng(9);
  auto rnd = [&](long long span) {
    return static_cast<long long>(rng() % (2 * span + 1)) - span;
  };
  auto rnorm = [&] {
    return std::exp(((static_cast<double>(rng() >> 11) * 0x1p-53) - 0.5) *
                    2.0);
  };
  for (int t = 0; t < 10; ++t) {
    WeightedVector a =
        wv({{rnd(2), rnd(2)}, {rnd(2), rnd(2)}, {rnd(2), rnd(2)}},
           {rnorm(), rnorm(), rnorm()});
    WeightedVector b = wv({{rnd(2), rnd(2)}, {rnd(2), rnd(2)}},
                          {rnorm(), rnorm()});
    LogNormFunction f{{{Rat(1), a}, {Rat(-1, 2), b}}};
    OneParamSubgroup lam = cochar({rnd(3), rnd(3)});
    if (lam[0] == 0 && lam[1] == 0) lam[0] = 1;
    SlopeAgreement s = slope_vs_fNA(f, lam);
    CHECK(s.diff <= 1e-3);
    CHECK(s.pass);
  }
}

TEST_CASE("the exact slope ignores the choice of norms") {
  std::vector<IntVec> weights{{Int(0)}, {Int(1)}};
  WeightedVector n1(weights, {1.0, 2.0});
  WeightedVector n2(weights, {2.0, 0.5});
  WeightedVector w = wv({{-1}}, {1.0});
  for (long long l : {-2LL, 1LL, 3LL})
    CHECK(fNA(difference(n1, w), cochar({l})) ==
          fNA(difference(n2, w), cochar({l})));
  SlopeAgreement s1 = slope_vs_fNA(difference(n1, w), cochar({1}));
  SlopeAgreement s2 = slope_vs_fNA(difference(n2, w), cochar({1}));
  CHECK(s1.exact == s2.exact);
  CHECK(s1.pass);
  CHECK(s2.pass);
}

TEST_CASE("clearing denominators preserves the exact slope") {
  WeightedVector a = wv({{0}, {1}}, {1.0, 1.0});
  WeightedVector b = wv({{-1}, {0}}, {1.0, 1.0});
  WeightedVector c = wv({{0}}, {1.0});
  LogNormFunction f{{{Rat(1, 2), a}, {Rat(1, 2), b}, {Rat(-1), c}}};
  ClearedPair pair = clear_denominators(f);
  CHECK(pair.power == 2);
  CHECK(pair.positive.weight_polytope().vertices().front()[0] == Rat(-1));
  CHECK(pair.positive.weight_polytope().vertices().back()[0] == Rat(1));
  for (long long l : {-3LL, -1LL, 2LL}) {
    OneParamSubgroup lam = cochar({l});
    Rat cleared = (pair.negative.min_pairing({Rat(l)}) -
                   pair.positive.min_pairing({Rat(l)})) /
                  Rat(pair.power);
    CHECK(fNA(f, lam) == cleared);
  }

  LogNormFunction huge{{{Rat(1000), a}}};
  CHECK_THROWS_WITH_AS(clear_denominators(huge),
                       "clear denominators: tensor power too large",
                       input_error);
}

TEST_CASE("boundedness below on the torus, decided three ways") {
  WeightedVector seg = wv({{-1}, {1}}, {1.0, 1.0});
  WeightedVector plus = wv({{1}}, {1.0});
  WeightedVector minus = wv({{-1}}, {1.0});

  BoundednessReport in = bounded_below_torus(difference(seg, plus));
  CHECK(in.bounded);
  CHECK(in.inclusion);
  CHECK(in.fan_scan);
  CHECK(in.feasibility);
  CHECK(in.witness.empty());
  CHECK(in.scan_min == Rat(0));

  BoundednessReport out = bounded_below_torus(difference(plus, minus));
  CHECK_FALSE(out.bounded);
  CHECK_FALSE(out.inclusion);
  CHECK_FALSE(out.fan_scan);
  CHECK_FALSE(out.feasibility);
  REQUIRE(out.witness.size() == 1);
  CHECK(out.witness_value < 0);
  CHECK(fNA(difference(plus, minus), out.witness) == out.witness_value);
  CHECK(out.witness_value == Rat(-2));

  CHECK(bounded_below_torus(difference(seg, seg)).bounded);
  CHECK(bounded_below_torus(LogNormFunction{}).bounded);

  // Rational coefficients go through the tensor clearing.
  WeightedVector a = wv({{0}, {1}}, {1.0, 1.0});
  WeightedVector b = wv({{-1}, {0}}, {1.0, 1.0});
  WeightedVector c = wv({{0}}, {1.0});
  LogNormFunction mixed{{{Rat(1, 2), a}, {Rat(1, 2), b}, {Rat(-1), c}}};
  BoundednessReport m = bounded_below_torus(mixed);
  CHECK(m.bounded);
  CHECK(m.scan_min == Rat(1, 2));

  // Degenerate rank-two data: a diagonal segment against single points.
  WeightedVector diag = wv({{0, 0}, {1, 1}}, {1.0, 1.0});
  CHECK(bounded_below_torus(difference(diag, wv({{0, 0}}, {1.0}))).bounded);
  BoundednessReport off =
      bounded_below_torus(difference(diag, wv({{1, 0}}, {1.0})));
  CHECK_FALSE(off.bounded);
  CHECK(fNA(difference(diag, wv({{1, 0}}, {1.0})), off.witness) < 0);

  WeightedVector r3 = WeightedVector({IntVec{Int(1), Int(0), Int(0)}}, {1.0});
  CHECK_THROWS_WITH_AS(
      bounded_below_torus(difference(r3, r3)),
      "rank above two is not supported by the boundedness decision",
      domain_error);
}

TEST_CASE("the three boundedness routes agree on random rank-two data") {
  std::mt19937_64 rng(11);
  auto rnd = [&](long long span) {
    return static_cast<long long>(rng() % (2 * span + 1)) - span;
  };
  int bounded_seen = 0, unbounded_seen = 0;
  for (int t = 0; t < 25; ++t) {
    int nv = 2 + static_cast<int>(rng() % 3);
    int nw = 1 + static_cast<int>(rng() % 2);
    std::vector<IntVec> wsv, wsw;
    for (int i = 0; i < nv; ++i) wsv.push_back(IntVec{rnd(2), rnd(2)});
    for (int i = 0; i < nw; ++i) wsw.push_back(IntVec{rnd(2), rnd(2)});
    WeightedVector v(wsv, VecD(nv, 1.0));
    WeightedVector w(wsw, VecD(nw, 1.0));
    Rat coeff = (t % 3 == 0) ? Rat(1, 2) : Rat(1);
    LogNormFunction f{{{coeff, v}, {-coeff, w}}};
    BoundednessReport rep = bounded_below_torus(f);  // consistency-checked
    CHECK(rep.inclusion == rep.fan_scan);
    CHECK(rep.inclusion == rep.feasibility);
    (rep.bounded ? bounded_seen : unbounded_seen)++;
  }
  CHECK(bounded_seen > 0);
  CHECK(unbounded_seen > 0);
}

TEST_CASE("rotating the vectors by sampled unitaries keeps the verdicts") {
  WeightedVector v = wv({{-1}, {1}}, {1.0, 1.0});
  WeightedVector w = wv({{1}}, {1.0});

  ConjugationReport same = conjugated_probe(difference(v, v), 16, 2);
  CHECK(same.stable);
  CHECK(same.bounded);
  CHECK(same.bounded_count == 17);
  CHECK(same.min_fna == Approx(0.0));

  ConjugationReport mix = conjugated_probe(difference(v, w), 16, 2);
  CHECK(mix.stable);
  CHECK(mix.bounded);
  CHECK(mix.bounded_count == 17);
  CHECK(mix.min_fna >= -1e-12);

  // The unbounded direction stays visible for every sampled rotation.
  WeightedVector plus = wv({{1}}, {1.0});
  WeightedVector minus = wv({{-1}}, {1.0});
  ConjugationReport bad = conjugated_probe(difference(plus, minus), 16, 2);
  CHECK(bad.stable);
  CHECK_FALSE(bad.bounded);
  CHECK(bad.bounded_count == 0);
  CHECK(bad.min_fna == Approx(-2.0));

  // Identity-only run reproduces the torus verdict.
  ConjugationReport id_only = conjugated_probe(difference(plus, minus), 0, 9);
  CHECK(id_only.bounded == bounded_below_torus(difference(plus, minus)).bounded);
  CHECK(id_only.stable);

  // Seeded reproducibility.
  ConjugationReport again = conjugated_probe(difference(v, w), 16, 2);
  CHECK(again.min_fna == mix.min_fna);
  CHECK(again.bounded_count == mix.bounded_count);
}

TEST_CASE("total ray weights reproduce configuration energies exactly") {
  MomentPolytope P(interval(0, 1));
  PLConvexFunction half_slope = PLConvexFunction::from_affines(
      P.poly(), {{{Rat(1, 2)}, Rat(0)}});
  PLConvexFunction constant = PLConvexFunction::constant(P.poly(), Rat(2, 3));

  LogNormFunction ef{{energy_term(P, half_slope, Rat(1))}};
  CHECK(fNA(ef, cochar({1})) == na_energy(make_config(P, half_slope)));
  CHECK(fNA(ef, cochar({1})) == Rat(1, 4));
  CHECK(fNA(ef, cochar({3})) == Rat(3) * na_energy(make_config(P, half_slope)));

  LogNormFunction eg{{energy_term(P, constant, Rat(1))}};
  CHECK(fNA(eg, cochar({1})) == Rat(2, 3));

  LogNormFunction ediff{
      {energy_term(P, half_slope, Rat(1)), energy_term(P, constant, Rat(-1))}};
  CHECK(fNA(ediff, cochar({1})) == na_energy(make_config(P, half_slope)) -
                                       na_energy(make_config(P, constant)));
  CHECK(fNA(ediff, cochar({1})) == Rat(-5, 12));
}

TEST_CASE("the projection onto exponential sums fixes its own potentials") {
  MomentPolytope P(interval(0, 1));
  PotentialPtr base = LsePotential::canonical_reference(P);
  PotentialPtr p1 = bergman_map(base, 1);
  double shift = p1->u({0.0}) - base->u({0.0});
  CHECK(shift == Approx(0.5 * std::log(2.0)).epsilon(1e-6));
  for (double x = -8.0; x <= 8.0; x += 0.5)
    CHECK(p1->u({x}) - base->u({x}) == Approx(shift).epsilon(1e-6));

  // Diagonal Gram entries at scale three against the beta-integral values.
  auto p3 = std::dynamic_pointer_cast<const LsePotential>(bergman_map(base, 3));
  REQUIRE(p3);
  double binom[4] = {1.0, 3.0, 3.0, 1.0};
  for (int k = 0; k < 4; ++k)
    CHECK(std::exp(-p3->log_weights()[k]) ==
          Approx(1.0 / (4.0 * binom[k])).epsilon(1e-8));
}

TEST_CASE("projection error shrinks as the scale grows") {
  MomentPolytope P(interval(0, 1));
  auto u2 = std::make_shared<LsePotential>(
      RatMat{{Rat(0)}, {Rat(1)}, {Rat(2)}}, VecD{0.0, -2.0, 0.0}, 2);
  double prev = 1e300;
  for (int m = 1; m <= 8; ++m) {
    PotentialPtr pm = bergman_map(u2, m);
    double sup = 0;
    for (double x = -6.0; x <= 6.0; x += 0.1)
      sup = std::max(sup, std::abs(pm->u({x}) - u2->u({x})));
    CHECK(sup < prev);
    prev = sup;
  }
}

TEST_CASE("the projection commutes with constant shifts") {
  MomentPolytope P(interval(0, 1));
  auto u2 = std::make_shared<LsePotential>(
      RatMat{{Rat(0)}, {Rat(1)}, {Rat(2)}}, VecD{0.0, -2.0, 0.0}, 2);
  auto shifted = std::make_shared<ShiftedPotential>(u2, 0.37);
  PotentialPtr a = bergman_map(u2, 3);
  PotentialPtr b = bergman_map(shifted, 3);
  for (double x = -5.0; x <= 5.0; x += 0.5)
    CHECK(b->u({x}) - a->u({x}) == Approx(0.37).epsilon(1e-8));
}

TEST_CASE("projection guards its inputs and its conditioning") {
  MomentPolytope P(interval(0, 1));
  PotentialPtr base = LsePotential::canonical_reference(P);
  CHECK_THROWS_AS(bergman_map(base, 0), input_error);
  CHECK_THROWS_AS(bergman_map(nullptr, 1), input_error);

  auto halfp = std::make_shared<LsePotential>(RatMat{{Rat(0)}, {Rat(1)}},
                                              VecD{0.0, 0.0}, 2);
  CHECK_THROWS_WITH_AS(bergman_map(halfp, 1),
                       "bergman projection requires a lattice moment polytope",
                       input_error);

  Polytope square = Polytope::hull(
      2, {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(0), Rat(1)},
          {Rat(1), Rat(1)}});
  PotentialPtr flat =
      LsePotential::canonical_reference(MomentPolytope(square));
  CHECK_THROWS_AS(bergman_map(flat, 1), input_error);

  auto skew = std::make_shared<LsePotential>(RatMat{{Rat(0)}, {Rat(1)}},
                                             VecD{0.0, -80.0}, 1);
  CHECK_THROWS_WITH(bergman_map(skew, 1),
                    doctest::Contains("condition number"));
}

TEST_CASE("curvature stays under the lattice-count bound on a grid") {
  MomentPolytope P(interval(0, 1));
  PotentialPtr fs = LsePotential::canonical_reference(P);
  RicciBoundReport r1 = ricci_bound_check(fs, 1);
  CHECK(r1.bound == 2.0);
  CHECK(r1.max_scalar == Approx(2.0).epsilon(1e-9));
  CHECK(r1.ok);
  CHECK(r1.violation == ricci_bound_violation(*fs, 1, 8.0, 400));

  std::mt19937_64 rng(13);
  VecD logw(4);
  for (double& c : logw)
    c = (static_cast<double>(rng() >> 11) * 0x1p-53 - 0.5) * 3.0;
  auto u3 = std::make_shared<LsePotential>(
      RatMat{{Rat(0)}, {Rat(1)}, {Rat(2)}, {Rat(3)}}, logw, 3);
  RicciBoundReport r3 = ricci_bound_check(u3, 3);
  CHECK(r3.bound == 12.0);
  CHECK(r3.ok);
  CHECK(r3.violation == ricci_bound_violation(*u3, 3, 8.0, 400));

  // Two-term potential with the transition pushed near the grid edge: the
  // collapsed tail is excluded by the resolvability floor and counted.
  auto edge = std::make_shared<LsePotential>(RatMat{{Rat(0)}, {Rat(1)}},
                                             VecD{0.0, -14.0}, 1);
  RicciBoundReport re = ricci_bound_check(edge, 1);
  CHECK(re.ok);
  CHECK(re.max_scalar == Approx(2.0).epsilon(1e-6));
  CHECK(re.skipped > 0);
  CHECK(re.violation == ricci_bound_violation(*edge, 1, 8.0, 400));

  CHECK_THROWS_AS(ricci_bound_check(fs, 0), input_error);
}
