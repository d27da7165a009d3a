#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "toric/lp.hpp"
#include "toric/moment.hpp"
#include "toric/polytope.hpp"

using namespace toric;

namespace {

Polytope box2(long long ax, long long ay, long long bx, long long by) {
  return Polytope::hull(2, {{Rat(ax), Rat(ay)},
                            {Rat(bx), Rat(ay)},
                            {Rat(ax), Rat(by)},
                            {Rat(bx), Rat(by)}});
}

}  // namespace

TEST_CASE("rational helpers reduce and round correctly") {
  CHECK(rat(1, 2) + rat(1, 3) == rat(5, 6));
  CHECK(rat_floor(rat(-3, 2)) == -2);
  CHECK(rat_ceil(rat(-3, 2)) == -1);
  CHECK(lattice_denominator({rat(1, 2), rat(2, 3)}) == 6);
  CHECK(rat_to_string(rat(-4, 6)) == "-2/3");
  CHECK(is_integer(rat(8, 4)));
}

TEST_CASE("exact linear algebra: determinant, solve, rank") {
  RatMat m{{rat(2), rat(1)}, {rat(1), rat(3)}};
  CHECK(det(m) == rat(5));
  auto x = solve_square(m, {rat(3), rat(4)});
  REQUIRE(x.has_value());
  CHECK((*x)[0] == rat(1));
  CHECK((*x)[1] == rat(1));
  RatMat sing{{rat(1), rat(2)}, {rat(2), rat(4)}};
  CHECK(!solve_square(sing, {rat(1), rat(1)}).has_value());
  CHECK(rank(sing) == 1);
  auto inv = mat_inverse(m);
  REQUIRE(inv.has_value());
  CHECK((*inv)[0][0] == rat(3, 5));
}

TEST_CASE("integer kernels and sublattice bases") {
  auto basis = integer_kernel_basis({Int(2), Int(3)});
  REQUIRE(basis.size() == 1);
  CHECK(basis[0][0] * 2 + basis[0][1] * 3 == 0);
  CHECK(boost::multiprecision::gcd(basis[0][0], basis[0][1]) == 1);

  // Lattice of integer xi with <a, xi> integral, a = (1/2, 1/2): index 2.
  auto sub = rational_form_kernel_basis({rat(1, 2), rat(1, 2)});
  REQUIRE(sub.size() == 2);
  Int d = sub[0][0] * sub[1][1] - sub[0][1] * sub[1][0];
  CHECK(boost::multiprecision::abs(d) == 2);
  for (const auto& v : sub) {
    Rat val = Rat(v[0]) / 2 + Rat(v[1]) / 2;
    CHECK(is_integer(val));
  }
}

TEST_CASE("simplex solves small programs exactly") {
  LPProblem p;
  p.nvars = 2;
  p.c = {rat(1), rat(1)};
  p.rows = {{{rat(1), rat(0)}, Rel::GE, rat(1)},
            {{rat(0), rat(1)}, Rel::GE, rat(2)}};
  auto s = solve_lp(p);
  REQUIRE(s.status == LPStatus::Optimal);
  CHECK(s.value == rat(3));
  CHECK(s.x[0] == rat(1));
  CHECK(s.x[1] == rat(2));

  LPProblem inf;
  inf.nvars = 1;
  inf.c = {rat(0)};
  inf.rows = {{{rat(1)}, Rel::GE, rat(1)}, {{rat(1)}, Rel::LE, rat(0)}};
  CHECK(solve_lp(inf).status == LPStatus::Infeasible);

  LPProblem unb;
  unb.nvars = 1;
  unb.c = {rat(-1)};
  unb.rows = {{{rat(1)}, Rel::GE, rat(0)}};
  CHECK(solve_lp(unb).status == LPStatus::Unbounded);

  // Equality constraints with a fractional optimum.
  LPProblem eq;
  eq.nvars = 2;
  eq.c = {rat(0), rat(1)};
  eq.rows = {{{rat(2), rat(1)}, Rel::EQ, rat(1)},
             {{rat(1), rat(0)}, Rel::LE, rat(1, 3)}};
  auto se = solve_lp(eq);
  REQUIRE(se.status == LPStatus::Optimal);
  CHECK(se.value == rat(1, 3));
}

TEST_CASE("polygon hulls: vertices, area, centroid, facets") {
  auto sq = box2(0, 0, 1, 1);
  CHECK(sq.dim() == 2);
  CHECK(sq.vertices().size() == 4);
  CHECK(sq.volume() == rat(1));
  CHECK(sq.centroid() == RatVec{rat(1, 2), rat(1, 2)});
  CHECK(sq.facets().size() == 4);
  CHECK(sq.contains({rat(1, 2), rat(1, 3)}));
  CHECK(!sq.contains({rat(3, 2), rat(1, 3)}));
  CHECK(sq.support({rat(1), rat(1)}) == rat(2));

  // Interior and mid-edge points are pruned from the vertex list.
  auto tri = Polytope::hull(2, {{rat(0), rat(0)},
                                {rat(2), rat(0)},
                                {rat(0), rat(2)},
                                {rat(1), rat(0)},
                                {rat(1, 2), rat(1, 2)}});
  CHECK(tri.vertices().size() == 3);
  CHECK(tri.volume() == rat(2));
}

TEST_CASE("lower dimensional hulls use lattice-normalized volumes") {
  auto seg = Polytope::hull(2, {{rat(0), rat(0)}, {rat(2), rat(2)}});
  CHECK(seg.dim() == 1);
  CHECK(seg.volume() == rat(0));
  CHECK(seg.volume_in_hull() == rat(2));  // two primitive steps (1,1)
  CHECK(seg.contains({rat(1), rat(1)}));
  CHECK(!seg.contains({rat(1), rat(0)}));

  auto pt = Polytope::hull(2, {{rat(3), rat(4)}});
  CHECK(pt.dim() == 0);
  CHECK(pt.volume_in_hull() == rat(1));

  // Triangle in a plane of 3-space: x+y+z = 1.
  auto tri = Polytope::hull(3, {{rat(1), rat(0), rat(0)},
                                {rat(0), rat(1), rat(0)},
                                {rat(0), rat(0), rat(1)}});
  CHECK(tri.dim() == 2);
  CHECK(tri.volume_in_hull() == rat(1, 2));
}

TEST_CASE("3d hulls: cube and simplex") {
  std::vector<RatVec> cube;
  for (int i = 0; i < 8; ++i)
    cube.push_back({Rat(i & 1), Rat((i >> 1) & 1), Rat((i >> 2) & 1)});
  auto c = Polytope::hull(3, cube);
  CHECK(c.dim() == 3);
  CHECK(c.volume() == rat(1));
  CHECK(c.facets().size() == 6);
  CHECK(c.vertices().size() == 8);
  CHECK(c.centroid() == RatVec{rat(1, 2), rat(1, 2), rat(1, 2)});
  CHECK(lattice_boundary_volume(c) == rat(6));

  auto t = Polytope::hull(3, {{rat(0), rat(0), rat(0)},
                              {rat(1), rat(0), rat(0)},
                              {rat(0), rat(1), rat(0)},
                              {rat(0), rat(0), rat(1)}});
  CHECK(t.volume() == rat(1, 6));
  CHECK(t.vertices().size() == 4);
  CHECK(t.facets().size() == 4);
  // Three coordinate facets of lattice area 1/2 plus the diagonal facet,
  // whose lattice-normalized area is also 1/2.
  CHECK(lattice_boundary_volume(t) == rat(2));
}

TEST_CASE("minkowski sums and mixed volumes") {
  auto sq = box2(0, 0, 1, 1);
  auto sum = Polytope::minkowski_sum(sq, sq);
  CHECK(sum.volume() == rat(4));

  CHECK(mixed_volume({sq, sq}) == rat(1));

  auto segx = Polytope::hull(2, {{rat(0), rat(0)}, {rat(1), rat(0)}});
  auto segy = Polytope::hull(2, {{rat(0), rat(0)}, {rat(0), rat(1)}});
  CHECK(mixed_volume({segx, segy}) == rat(1, 2));
  CHECK(mixed_volume({segx, segx}) == rat(0));

  std::vector<RatVec> cube;
  for (int i = 0; i < 8; ++i)
    cube.push_back({Rat(i & 1), Rat((i >> 1) & 1), Rat((i >> 2) & 1)});
  auto c = Polytope::hull(3, cube);
  CHECK(mixed_volume({c, c, c}) == rat(1));

  // Random rational polygons: symmetry and the diagonal normalization.
  std::mt19937_64 rng(12345);
  auto rnd = [&]() { return rat(static_cast<long long>(rng() % 13) - 6, 1 + rng() % 4); };
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<RatVec> pa, pb;
    for (int i = 0; i < 5; ++i) {
      pa.push_back({rnd(), rnd()});
      pb.push_back({rnd(), rnd()});
    }
    Polytope A, B;
    try {
      A = Polytope::hull(2, pa);
      B = Polytope::hull(2, pb);
    } catch (const consistency_error&) {
      continue;  // degenerate random draw
    }
    if (A.dim() < 2 || B.dim() < 2) continue;
    CHECK(mixed_volume({A, B}) == mixed_volume({B, A}));
    CHECK(mixed_volume({A, A}) == A.volume());
    // Monotone in each argument under inclusion of a Minkowski summand.
    auto AB = Polytope::minkowski_sum(A, B);
    CHECK(mixed_volume({AB, B}) == mixed_volume({A, B}) + B.volume());
  }
}

TEST_CASE("polygon and segment clipping") {
  std::vector<RatVec> sq{{rat(0), rat(0)}, {rat(1), rat(0)},
                         {rat(1), rat(1)}, {rat(0), rat(1)}};
  auto half = clip_polygon(sq, {rat(1), rat(0)}, rat(1, 2));
  auto poly = Polytope::hull(2, half);
  CHECK(poly.volume() == rat(1, 2));
  auto gone = clip_polygon(sq, {rat(1), rat(0)}, rat(2));
  CHECK(gone.empty());

  auto cell = box2(0, 0, 1, 1);
  auto clip = clip_segment(cell, {rat(-1), rat(1, 2)}, {rat(2), rat(1, 2)});
  REQUIRE(clip.nonempty);
  CHECK(clip.t0 == rat(1, 3));
  CHECK(clip.t1 == rat(2, 3));
  auto miss = clip_segment(cell, {rat(-1), rat(2)}, {rat(2), rat(2)});
  CHECK(!miss.nonempty);
}

TEST_CASE("empty input is rejected") {
  CHECK_THROWS_AS(Polytope::hull(2, {}), input_error);
}

TEST_CASE("moment polytope data: degree, mean scalar curvature") {
  MomentPolytope seg(Polytope::hull(1, {{rat(0)}, {rat(2)}}));
  CHECK(seg.degree() == rat(2));
  CHECK(seg.sbar() == rat(1));
  CHECK(seg.lattice_points().size() == 3);
  auto t = seg.reflexive_translate();
  REQUIRE(t.has_value());
  CHECK((*t)[0] == rat(1));

  MomentPolytope unit(Polytope::hull(1, {{rat(0)}, {rat(1)}}));
  CHECK(unit.sbar() == rat(2));
  CHECK(!unit.reflexive_translate().has_value());

  MomentPolytope sq(box2(0, 0, 1, 1));
  CHECK(sq.degree() == rat(2));
  CHECK(sq.sbar() == rat(4));
  CHECK(sq.lattice_points().size() == 4);
  MomentPolytope sq2(box2(0, 0, 2, 2));
  auto t2 = sq2.reflexive_translate();
  REQUIRE(t2.has_value());
  CHECK(*t2 == RatVec{rat(1), rat(1)});
}

TEST_CASE("log discrepancies via unimodular vertex cones") {
  MomentPolytope seg(Polytope::hull(1, {{rat(0)}, {rat(2)}}));
  CHECK(seg.log_discrepancy({rat(1)}) == rat(1));
  CHECK(seg.log_discrepancy({rat(-1)}) == rat(1));
  CHECK(seg.log_discrepancy({rat(1, 2)}) == rat(1, 2));
  CHECK(seg.log_discrepancy({rat(0)}) == rat(0));
  CHECK(seg.log_discrepancy_product({rat(-3)}, rat(2)) == rat(5));

  MomentPolytope sq(box2(0, 0, 1, 1));
  CHECK(sq.fan_is_smooth());
  CHECK(sq.log_discrepancy({rat(1), rat(1)}) == rat(2));
  CHECK(sq.log_discrepancy({rat(1), rat(-2)}) == rat(3));

  // P^2 polytope: smooth; a simplex with a non-unimodular vertex: refused.
  MomentPolytope p2(Polytope::hull(
      2, {{rat(0), rat(0)}, {rat(2), rat(0)}, {rat(0), rat(2)}}));
  CHECK(p2.fan_is_smooth());
  CHECK(p2.log_discrepancy({rat(-1), rat(-1)}) == rat(1));

  MomentPolytope bad(Polytope::hull(
      2, {{rat(0), rat(0)}, {rat(1), rat(0)}, {rat(0), rat(2)}}));
  CHECK(!bad.fan_is_smooth());
  CHECK_THROWS_AS(bad.log_discrepancy({rat(1), rat(1)}), domain_error);
}

TEST_CASE("dilation scales volumes and lattice data") {
  MomentPolytope seg(Polytope::hull(1, {{rat(0)}, {rat(1)}}));
  auto seg2 = seg.dilate(3);
  CHECK(seg2.vol() == rat(3));
  CHECK(seg2.lattice_points().size() == 4);
}
