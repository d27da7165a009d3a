#include "toric/moment.hpp"

#include <algorithm>

#include "toric/errors.hpp"

namespace toric {

MomentPolytope::MomentPolytope(Polytope p) : p_(std::move(p)) {
  if (p_.dim() != p_.ambient_dim())
    throw input_error("moment polytope must be full-dimensional");
}

Rat MomentPolytope::degree() const {
  Rat nf = 1;
  for (int i = 2; i <= n(); ++i) nf *= i;
  return nf * vol();
}

Rat MomentPolytope::sbar() const { return lattice_boundary_volume(p_) / vol(); }

bool MomentPolytope::is_lattice() const {
  for (const auto& v : p_.vertices())
    for (const auto& c : v)
      if (!is_integer(c)) return false;
  return true;
}

std::vector<RatVec> MomentPolytope::lattice_points() const {
  const int d = n();
  std::vector<Int> lo(d), hi(d);
  const auto& vs = p_.vertices();
  for (int k = 0; k < d; ++k) {
    Rat mn = vs[0][k], mx = vs[0][k];
    for (const auto& v : vs) {
      mn = std::min(mn, v[k]);
      mx = std::max(mx, v[k]);
    }
    lo[k] = rat_ceil(mn);
    hi[k] = rat_floor(mx);
  }
  std::vector<RatVec> out;
  RatVec cur(d);
  // Odometer over the bounding box.
  std::vector<Int> idx = lo;
  for (;;) {
    for (int k = 0; k < d; ++k) cur[k] = Rat(idx[k]);
    if (p_.contains(cur)) out.push_back(cur);
    int k = d - 1;
    while (k >= 0) {
      if (idx[k] < hi[k]) {
        ++idx[k];
        break;
      }
      idx[k] = lo[k];
      --k;
    }
    if (k < 0) break;
  }
  return out;
}

void MomentPolytope::build_cones() const {
  if (cones_ready_) return;
  cones_ready_ = true;
  smooth_ = true;
  const int d = n();
  const auto& fs = p_.facets();
  for (const auto& v : p_.vertices()) {
    RatMat cols;  // active facet normals as columns
    for (const auto& f : fs) {
      Rat val = 0;
      for (int k = 0; k < d; ++k) val += Rat(f.normal[k]) * v[k];
      if (val == f.rhs) {
        RatVec col(d);
        for (int k = 0; k < d; ++k) col[k] = Rat(f.normal[k]);
        cols.push_back(col);
      }
    }
    if (static_cast<int>(cols.size()) != d) {
      smooth_ = false;
      return;
    }
    RatMat m(d, RatVec(d));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m[i][j] = cols[j][i];
    Rat dm = det(m);
    if (dm != 1 && dm != -1) {
      smooth_ = false;
      return;
    }
    auto inv = mat_inverse(m);
    cones_.push_back(VertexCone{*inv});
  }
}

bool MomentPolytope::fan_is_smooth() const {
  build_cones();
  return smooth_;
}

Rat MomentPolytope::log_discrepancy(const RatVec& w) const {
  build_cones();
  if (!smooth_) throw domain_error("non-smooth cone");
  for (const auto& cone : cones_) {
    RatVec c = mat_apply(cone.inv, w);
    bool ok = true;
    Rat sum = 0;
    for (const auto& x : c) {
      if (x < 0) {
        ok = false;
        break;
      }
      sum += x;
    }
    if (ok) return sum;
  }
  throw consistency_error("weight not covered by the normal fan");
}

Rat MomentPolytope::log_discrepancy_product(const RatVec& w,
                                            const Rat& t) const {
  if (t < 0) throw input_error("product-fan weight needs t >= 0");
  build_cones();
  if (!smooth_) throw domain_error("non-smooth cone");
  const int d = n();
  const auto& fs = p_.facets();
  // Assemble each product cone (vertex cone) x (half line) explicitly in
  // dimension n+1 and expand (w, t) over its generators.
  for (const auto& v : p_.vertices()) {
    RatMat m(d + 1, RatVec(d + 1, Rat(0)));
    int col = 0;
    for (const auto& f : fs) {
      Rat val = 0;
      for (int k = 0; k < d; ++k) val += Rat(f.normal[k]) * v[k];
      if (val != f.rhs) continue;
      if (col >= d) throw consistency_error("vertex with too many facets");
      for (int k = 0; k < d; ++k) m[k][col] = Rat(f.normal[k]);
      ++col;
    }
    if (col != d) continue;
    m[d][d] = 1;  // the extra generator (0, ..., 0, 1)
    RatVec rhs(w);
    rhs.push_back(t);
    auto c = solve_square(m, rhs);
    if (!c) continue;
    bool ok = true;
    Rat sum = 0;
    for (const auto& x : *c) {
      if (x < 0) {
        ok = false;
        break;
      }
      sum += x;
    }
    if (ok) return sum;
  }
  throw consistency_error("product weight not covered by the product fan");
}

std::optional<RatVec> MomentPolytope::reflexive_translate() const {
  const int d = n();
  const auto& fs = p_.facets();
  RatMat a;
  RatVec b;
  for (const auto& f : fs) {
    RatVec row(d);
    for (int k = 0; k < d; ++k) row[k] = Rat(f.normal[k]);
    a.push_back(row);
    b.push_back(f.rhs + 1);
  }
  auto t = solve_general(a, b);
  if (!t) return std::nullopt;
  // Verify (solve_general guarantees it) and require a lattice point.
  for (const auto& c : *t)
    if (!is_integer(c)) return std::nullopt;
  return t;
}

MomentPolytope MomentPolytope::dilate(long long k) const {
  if (k < 1) throw input_error("dilation factor must be positive");
  std::vector<RatVec> pts;
  for (const auto& v : p_.vertices()) pts.push_back(vscale(Rat(k), v));
  return MomentPolytope(Polytope::hull(n(), std::move(pts)));
}

}  // namespace toric
