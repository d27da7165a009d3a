#include "toric/polytope.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <utility>

#include "toric/errors.hpp"

namespace toric {

namespace {

Rat cross2(const RatVec& o, const RatVec& a, const RatVec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

RatVec cross3(const RatVec& u, const RatVec& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
          u[0] * v[1] - u[1] * v[0]};
}

bool lex_less(const RatVec& a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

// Andrew's monotone chain; input has affine rank 2; returns a CCW cycle of
// irredundant vertices starting at the lexicographic minimum.
std::vector<RatVec> hull_2d(std::vector<RatVec> pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<RatVec> lo, hi;
  for (const auto& p : pts) {
    while (lo.size() >= 2 && cross2(lo[lo.size() - 2], lo.back(), p) <= 0)
      lo.pop_back();
    lo.push_back(p);
  }
  for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
    while (hi.size() >= 2 && cross2(hi[hi.size() - 2], hi.back(), *it) <= 0)
      hi.pop_back();
    hi.push_back(*it);
  }
  lo.pop_back();
  hi.pop_back();
  lo.insert(lo.end(), hi.begin(), hi.end());
  return lo;
}

struct Tri {
  int a, b, c;
  RatVec n;  // outward normal: hull satisfies <n, x> <= rhs
  Rat rhs;
};

// Incremental 3D hull over exact rationals; returns oriented triangles.
std::vector<Tri> hull_3d(const std::vector<RatVec>& pts,
                         const std::array<int, 4>& seed) {
  RatVec cint(3, Rat(0));
  for (int i : seed)
    for (int k = 0; k < 3; ++k) cint[k] += pts[i][k] / 4;

  auto make_tri = [&](int a, int b, int c) {
    Tri t{a, b, c, cross3(vsub(pts[b], pts[a]), vsub(pts[c], pts[a])), Rat(0)};
    t.rhs = dot(t.n, pts[a]);
    if (dot(t.n, cint) > t.rhs) {
      std::swap(t.b, t.c);
      for (auto& x : t.n) x = -x;
      t.rhs = -t.rhs;
    }
    return t;
  };

  std::vector<Tri> tris;
  tris.push_back(make_tri(seed[0], seed[1], seed[2]));
  tris.push_back(make_tri(seed[0], seed[1], seed[3]));
  tris.push_back(make_tri(seed[0], seed[2], seed[3]));
  tris.push_back(make_tri(seed[1], seed[2], seed[3]));

  for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
    if (p == seed[0] || p == seed[1] || p == seed[2] || p == seed[3]) continue;
    std::vector<char> vis(tris.size(), 0);
    bool any = false;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (dot(tris[t].n, pts[p]) > tris[t].rhs) {
        vis[t] = 1;
        any = true;
      }
    }
    if (!any) continue;
    std::set<std::pair<int, int>> edges;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (!vis[t]) continue;
      const Tri& tr = tris[t];
      edges.insert({tr.a, tr.b});
      edges.insert({tr.b, tr.c});
      edges.insert({tr.c, tr.a});
    }
    std::vector<std::pair<int, int>> horizon;
    for (const auto& e : edges)
      if (!edges.count({e.second, e.first})) horizon.push_back(e);
    std::vector<Tri> next;
    for (std::size_t t = 0; t < tris.size(); ++t)
      if (!vis[t]) next.push_back(tris[t]);
    for (const auto& e : horizon) next.push_back(make_tri(e.first, e.second, p));
    tris = std::move(next);
  }
  return tris;
}

}  // namespace

Polytope Polytope::hull(int ambient, std::vector<RatVec> points) {
  if (ambient < 1 || ambient > 3)
    throw input_error("hull implemented for ambient dimension 1..3 only");
  std::sort(points.begin(), points.end(), lex_less);
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.empty()) throw input_error("empty polytope");
  for (const auto& p : points)
    if (static_cast<int>(p.size()) != ambient)
      throw input_error("point dimension mismatch");

  Polytope q;
  q.amb_ = ambient;
  q.pts_ = points;
  q.p0_ = points[0];

  // Affine rank and a rational basis of the direction space.
  RatMat dirs;
  for (std::size_t i = 1; i < points.size(); ++i)
    dirs.push_back(vsub(points[i], points[0]));
  RatMat red = dirs;
  auto pivots = rref(red);
  int r = static_cast<int>(pivots.size());
  q.dim_ = r;

  // Z-basis of (direction space) ∩ Z^ambient.
  if (r == ambient) {
    q.lat_basis_.assign(ambient, IntVec(ambient, Int(0)));
    for (int i = 0; i < ambient; ++i) q.lat_basis_[i][i] = 1;
  } else {
    // Normal forms: nullspace of the direction-row matrix.
    RatMat m = dirs;
    auto piv = rref(m);
    std::vector<char> is_pivot(ambient, 0);
    for (auto c : piv) is_pivot[c] = 1;
    std::vector<RatVec> forms;
    for (int fc = 0; fc < ambient; ++fc) {
      if (is_pivot[fc]) continue;
      RatVec f(ambient, Rat(0));
      f[fc] = 1;
      for (std::size_t k = 0; k < piv.size(); ++k) f[piv[k]] = -m[k][fc];
      forms.push_back(f);  // <f, d> = 0 for all directions d
    }
    // Iteratively restrict the standard lattice by each exact linear form.
    std::vector<IntVec> basis(ambient, IntVec(ambient, Int(0)));
    for (int i = 0; i < ambient; ++i) basis[i][i] = 1;
    for (const auto& f : forms) {
      if (basis.empty()) break;
      RatVec induced(basis.size(), Rat(0));
      for (std::size_t j = 0; j < basis.size(); ++j)
        for (int k = 0; k < ambient; ++k) induced[j] += f[k] * Rat(basis[j][k]);
      Int b = lattice_denominator(induced);
      IntVec w(basis.size());
      bool all_zero = true;
      for (std::size_t j = 0; j < basis.size(); ++j) {
        w[j] = num(induced[j] * b);
        if (w[j] != 0) all_zero = false;
      }
      if (all_zero) continue;
      auto ker = integer_kernel_basis(w);
      std::vector<IntVec> nb;
      for (const auto& coef : ker) {
        IntVec v(ambient, Int(0));
        for (std::size_t j = 0; j < basis.size(); ++j)
          for (int k = 0; k < ambient; ++k) v[k] += coef[j] * basis[j][k];
        nb.push_back(v);
      }
      basis = std::move(nb);
    }
    q.lat_basis_ = basis;
  }

  // Lattice coordinates of every point.
  std::vector<RatVec> coord_pts;
  coord_pts.reserve(points.size());
  for (const auto& p : points) {
    auto c = q.coords_of(p);
    if (!c) throw consistency_error("hull point outside its own affine hull");
    coord_pts.push_back(*c);
  }
  q.build_from_coords(std::move(coord_pts));
  return q;
}

std::optional<RatVec> Polytope::coords_of(const RatVec& p) const {
  RatVec d = vsub(p, p0_);
  if (dim_ == 0) {
    for (const auto& x : d)
      if (x != 0) return std::nullopt;
    return RatVec{};
  }
  if (dim_ == amb_ ) {
    return d;  // identity lattice basis
  }
  RatMat a(amb_, RatVec(dim_, Rat(0)));
  for (int i = 0; i < amb_; ++i)
    for (int j = 0; j < dim_; ++j) a[i][j] = Rat(lat_basis_[j][i]);
  return solve_general(a, d);
}

RatVec Polytope::from_coords(const RatVec& c) const {
  RatVec p = p0_;
  for (int j = 0; j < dim_; ++j)
    for (int i = 0; i < amb_; ++i) p[i] += c[j] * Rat(lat_basis_[j][i]);
  return p;
}

void Polytope::build_from_coords(std::vector<RatVec> coord_pts) {
  const int r = dim_;
  if (r == 0) {
    vol_hull_ = 1;
    centroid_ = p0_;
    corner_coords_ = {RatVec{}};
    verts_ = {p0_};
    verts_ready_ = true;
    return;
  }
  if (r == 1) {
    Rat tmin = coord_pts[0][0], tmax = tmin;
    for (const auto& c : coord_pts) {
      tmin = std::min(tmin, c[0]);
      tmax = std::max(tmax, c[0]);
    }
    vol_hull_ = tmax - tmin;
    corner_coords_ = {RatVec{tmin}, RatVec{tmax}};
    centroid_ = from_coords(RatVec{(tmin + tmax) / 2});
    coord_facets_.push_back({IntVec{Int(1)}, tmin});
    coord_facets_.push_back({IntVec{Int(-1)}, -tmax});
    if (vol_hull_ == 0) throw consistency_error("degenerate segment hull");
    verts_ = {from_coords(corner_coords_[0]), from_coords(corner_coords_[1])};
    verts_ready_ = true;
  } else if (r == 2) {
    auto cyc = hull_2d(coord_pts);
    corner_coords_ = cyc;
    Rat area2 = 0;
    RatVec cen(2, Rat(0));
    const std::size_t k = cyc.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto& a = cyc[i];
      const auto& b = cyc[(i + 1) % k];
      Rat cr = a[0] * b[1] - a[1] * b[0];
      area2 += cr;
      cen[0] += (a[0] + b[0]) * cr;
      cen[1] += (a[1] + b[1]) * cr;
    }
    vol_hull_ = area2 / 2;
    if (vol_hull_ <= 0) throw consistency_error("degenerate polygon hull");
    cen[0] /= 3 * area2;
    cen[1] /= 3 * area2;
    centroid_ = from_coords(cen);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& a = cyc[i];
      const auto& b = cyc[(i + 1) % k];
      RatVec d = vsub(b, a);
      RatVec inward{-d[1], d[0]};  // left of the edge direction (CCW cycle)
      IntVec n = primitive_direction(inward);
      Rat rhs = Rat(n[0]) * a[0] + Rat(n[1]) * a[1];
      coord_facets_.push_back({n, rhs});
    }
    verts_.clear();
    for (const auto& c : cyc) verts_.push_back(from_coords(c));
    verts_ready_ = true;
  } else {
    // r == 3: pick four affinely independent seed points.
    std::array<int, 4> seed{0, -1, -1, -1};
    RatMat acc;
    for (std::size_t i = 1; i < coord_pts.size() && seed[3] < 0; ++i) {
      RatMat test = acc;
      test.push_back(vsub(coord_pts[i], coord_pts[0]));
      if (rank(test) > acc.size()) {
        acc.push_back(vsub(coord_pts[i], coord_pts[0]));
        seed[acc.size()] = static_cast<int>(i);
      }
    }
    auto tris = hull_3d(coord_pts, seed);
    // Volume and centroid via signed tetrahedra from the coordinate origin.
    Rat vol6 = 0;
    RatVec cen(3, Rat(0));
    for (const auto& t : tris) {
      const auto& A = coord_pts[t.a];
      const auto& B = coord_pts[t.b];
      const auto& C = coord_pts[t.c];
      Rat d6 = dot(t.n, A);  // det(A,B,C) with outward normal cross(B-A,C-A)
      // det(A,B,C) equals <cross(B-A, C-A), A>.
      vol6 += d6;
      for (int k = 0; k < 3; ++k) cen[k] += d6 * (A[k] + B[k] + C[k]) / 4;
    }
    vol_hull_ = vol6 / 6;
    if (vol_hull_ <= 0) throw consistency_error("degenerate 3d hull");
    for (int k = 0; k < 3; ++k) cen[k] /= vol6;
    centroid_ = from_coords(cen);
    // Distinct facet planes (inward form), and hull corner set.
    std::map<std::pair<std::vector<std::string>, std::string>, Facet> planes;
    std::set<int> corner_ids;
    for (const auto& t : tris) {
      corner_ids.insert(t.a);
      corner_ids.insert(t.b);
      corner_ids.insert(t.c);
      RatVec inw{-t.n[0], -t.n[1], -t.n[2]};
      IntVec n = primitive_direction(inw);
      Rat rhs = 0;
      for (int k = 0; k < 3; ++k) rhs += Rat(n[k]) * coord_pts[t.a][k];
      std::vector<std::string> key_n;
      for (const auto& x : n) key_n.push_back(x.str());
      planes.insert({{key_n, rat_to_string(rhs)}, Facet{n, rhs}});
    }
    for (const auto& kv : planes) coord_facets_.push_back(kv.second);
    for (int id : corner_ids) corner_coords_.push_back(coord_pts[id]);
  }

  if (dim_ == amb_) {
    facets_ = coord_facets_;
    // Coordinates are x - p0; shift offsets back to ambient coordinates.
    for (auto& f : facets_) {
      Rat shift = 0;
      for (int k = 0; k < amb_; ++k) shift += Rat(f.normal[k]) * p0_[k];
      f.rhs += shift;
    }
  }
}

const std::vector<RatVec>& Polytope::vertices() const {
  if (verts_ready_) return verts_;
  // 3D case: a corner is a vertex iff its active facet normals span rank 3.
  std::vector<RatVec> out;
  for (const auto& c : corner_coords_) {
    RatMat normals;
    for (const auto& f : coord_facets_) {
      Rat v = 0;
      for (int k = 0; k < dim_; ++k) v += Rat(f.normal[k]) * c[k];
      if (v == f.rhs) {
        RatVec row(dim_);
        for (int k = 0; k < dim_; ++k) row[k] = Rat(f.normal[k]);
        normals.push_back(row);
      }
    }
    if (static_cast<int>(rank(normals)) == dim_) out.push_back(from_coords(c));
  }
  std::sort(out.begin(), out.end(), lex_less);
  verts_ = std::move(out);
  verts_ready_ = true;
  return verts_;
}

Rat Polytope::volume() const { return dim_ == amb_ ? vol_hull_ : Rat(0); }

const std::vector<Facet>& Polytope::facets() const {
  if (dim_ != amb_)
    throw input_error("facet inequalities require a full-dimensional polytope");
  return facets_;
}

std::vector<Polytope> Polytope::facet_polytopes() const {
  std::vector<Polytope> out;
  if (dim_ == 0) return out;
  for (const auto& f : coord_facets_) {
    std::vector<RatVec> on_facet;
    for (const auto& c : corner_coords_) {
      Rat v = 0;
      for (int k = 0; k < dim_; ++k) v += Rat(f.normal[k]) * c[k];
      if (v == f.rhs) on_facet.push_back(from_coords(c));
    }
    out.push_back(Polytope::hull(amb_, on_facet));
  }
  return out;
}

bool Polytope::contains(const RatVec& p) const {
  if (static_cast<int>(p.size()) != amb_)
    throw input_error("point dimension mismatch");
  auto c = coords_of(p);
  if (!c) return false;
  if (dim_ == 0) return true;
  for (const auto& f : coord_facets_) {
    Rat v = 0;
    for (int k = 0; k < dim_; ++k) v += Rat(f.normal[k]) * (*c)[k];
    if (v < f.rhs) return false;
  }
  return true;
}

Rat Polytope::support(const RatVec& w) const {
  const auto& vs = vertices();
  Rat best = dot(w, vs[0]);
  for (const auto& v : vs) best = std::max(best, dot(w, v));
  return best;
}

Polytope Polytope::minkowski_sum(const Polytope& a, const Polytope& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw input_error("minkowski sum dimension mismatch");
  std::vector<RatVec> sums;
  for (const auto& va : a.vertices())
    for (const auto& vb : b.vertices()) sums.push_back(vadd(va, vb));
  return Polytope::hull(a.ambient_dim(), std::move(sums));
}

Rat mixed_volume(const std::vector<Polytope>& qs) {
  const int n = static_cast<int>(qs.size());
  if (n < 1 || n > 3) throw input_error("mixed volume needs 1..3 bodies");
  for (const auto& q : qs)
    if (q.ambient_dim() != n)
      throw input_error("mixed volume: ambient dimension must match count");
  Rat total = 0;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<RatVec> sums{RatVec(n, Rat(0))};
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1 << i))) continue;
      std::vector<RatVec> next;
      for (const auto& s : sums)
        for (const auto& v : qs[i].vertices()) next.push_back(vadd(s, v));
      sums = std::move(next);
    }
    int bits = __builtin_popcount(static_cast<unsigned>(mask));
    Rat vol = Polytope::hull(n, std::move(sums)).volume();
    if ((n - bits) % 2 == 1) vol = -vol;
    total += vol;
  }
  Rat nfact = 1;
  for (int i = 2; i <= n; ++i) nfact *= i;
  return total / nfact;
}

bool polytope_contains(const Polytope& outer, const Polytope& inner) {
  for (const auto& v : inner.vertices())
    if (!outer.contains(v)) return false;
  return true;
}

Rat lattice_boundary_volume(const Polytope& p) {
  Rat s = 0;
  for (const auto& f : p.facet_polytopes()) s += f.volume_in_hull();
  return s;
}

std::vector<RatVec> clip_polygon(const std::vector<RatVec>& poly,
                                 const RatVec& nu, const Rat& rhs) {
  std::vector<RatVec> out;
  const std::size_t k = poly.size();
  for (std::size_t i = 0; i < k; ++i) {
    const RatVec& a = poly[i];
    const RatVec& b = poly[(i + 1) % k];
    Rat va = dot(nu, a) - rhs, vb = dot(nu, b) - rhs;
    if (va >= 0) out.push_back(a);
    if ((va > 0 && vb < 0) || (va < 0 && vb > 0)) {
      Rat t = va / (va - vb);
      RatVec x(a.size());
      for (std::size_t j = 0; j < a.size(); ++j)
        x[j] = a[j] + t * (b[j] - a[j]);
      out.push_back(x);
    }
  }
  std::vector<RatVec> dedup;
  for (const auto& p2 : out)
    if (dedup.empty() || dedup.back() != p2) dedup.push_back(p2);
  if (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();
  return dedup;
}

SegmentClip clip_segment(const Polytope& cell, const RatVec& p,
                         const RatVec& q) {
  SegmentClip res;
  Rat t0 = 0, t1 = 1;
  for (const auto& f : cell.facets()) {
    RatVec n(f.normal.size());
    for (std::size_t i = 0; i < n.size(); ++i) n[i] = Rat(f.normal[i]);
    Rat vp = dot(n, p) - f.rhs;
    Rat vq = dot(n, q) - f.rhs;
    Rat slope = vq - vp;  // value along t: vp + t*slope >= 0 required
    if (slope == 0) {
      if (vp < 0) return res;
      continue;
    }
    Rat tc = -vp / slope;
    if (slope > 0)
      t0 = std::max(t0, tc);
    else
      t1 = std::min(t1, tc);
  }
  if (t0 >= t1) return res;
  res.nonempty = true;
  res.t0 = t0;
  res.t1 = t1;
  return res;
}

}  // namespace toric
