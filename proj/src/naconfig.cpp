#include "toric/naconfig.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "toric/errors.hpp"
#include "toric/lp.hpp"

namespace toric {
namespace {

Rat affine_value(const RatVec& a, const Rat& c, const RatVec& y) {
  Rat v = c;
  for (std::size_t i = 0; i < a.size(); ++i) v += a[i] * y[i];
  return v;
}

Rat factorial(int n) {
  Rat r(1);
  for (int k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace

ToricTestConfig make_config(const MomentPolytope& P,
                            const PLConvexFunction& f) {
  return make_config(P, f, Rat(rat_ceil(f.max_value()) + 1));
}

ToricTestConfig make_config(const MomentPolytope& P, const PLConvexFunction& f,
                            const Rat& height) {
  const int n = P.n();
  if (f.n() != n) throw input_error("PL function dimension mismatch");
  if (!polytope_contains(P.poly(), f.domain()) ||
      !polytope_contains(f.domain(), P.poly()))
    throw input_error("PL domain does not match the moment polytope");
  const Rat max_f = f.max_value();
  if (height <= max_f) throw input_error("roof height must exceed max f");

  // Group cells carrying the same affine function: they belong to a single
  // component whose region is the (convex) locus where that affine is the max.
  std::map<std::pair<RatVec, Rat>, std::vector<std::size_t>> groups;
  std::vector<std::pair<RatVec, Rat>> order;
  const auto& cells = f.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto key = std::make_pair(cells[i].slope, cells[i].offset);
    auto it = groups.find(key);
    if (it == groups.end()) {
      groups.emplace(key, std::vector<std::size_t>{i});
      order.push_back(key);
    } else {
      it->second.push_back(i);
    }
  }

  ToricTestConfig cfg{P, f, height, Polytope(), {}};

  std::vector<RatVec> roof_pts;
  for (const PLCell& cell : cells)
    for (const RatVec& v : cell.region.vertices()) {
      RatVec base = v, top = v;
      base.push_back(Rat(0));
      top.push_back(height - f.value(v));
      roof_pts.push_back(std::move(base));
      roof_pts.push_back(std::move(top));
    }
  cfg.roof = Polytope::hull(n + 1, std::move(roof_pts));

  Rat mass_total(0);
  for (const auto& key : order) {
    const auto& members = groups.at(key);
    NAComponent comp;
    comp.slope = key.first;
    comp.offset = key.second;
    comp.multiplicity = lattice_denominator(comp.slope);
    comp.weight.resize(n);
    for (int i = 0; i < n; ++i) comp.weight[i] = -comp.slope[i];
    comp.log_disc = P.log_discrepancy(comp.weight);

    comp.cell_volume = 0;
    Rat integral(0);
    std::vector<RatVec> lifted;
    for (std::size_t idx : members) {
      const PLCell& cell = cells[idx];
      comp.cell_volume += cell.region.volume();
      integral += affine_value(cell.slope, cell.offset,
                               cell.region.centroid()) *
                  cell.region.volume();
      for (const RatVec& v : cell.region.vertices()) {
        RatVec top = v;
        top.push_back(height - f.value(v));
        lifted.push_back(std::move(top));
      }
    }
    comp.mass = comp.cell_volume / P.vol();
    comp.pairing = 2 * (integral / comp.cell_volume) - max_f;
    mass_total += comp.mass;

    // Cross-check 1: the component's roof facet. Its primitive inward normal
    // is b (v, -1) with offset b (c - height); the facet's lattice area times
    // b must reproduce the cell volume.
    RatVec nu(n + 1);
    for (int i = 0; i < n; ++i) nu[i] = Rat(comp.multiplicity) * comp.weight[i];
    nu[n] = -Rat(comp.multiplicity);
    const Rat rhs = Rat(comp.multiplicity) * (comp.offset - height);
    bool found = false;
    for (const Facet& face : cfg.roof.facets()) {
      if (static_cast<int>(face.normal.size()) != n + 1) continue;
      bool same = (face.rhs == rhs);
      for (int i = 0; same && i <= n; ++i)
        if (Rat(face.normal[i]) != nu[i]) same = false;
      if (same) {
        found = true;
        break;
      }
    }
    if (!found)
      throw consistency_error("component facet mismatch: missing roof facet");
    Polytope facet_hull = Polytope::hull(n + 1, lifted);
    if (facet_hull.dim() != n ||
        Rat(comp.multiplicity) * facet_hull.volume_in_hull() !=
            comp.cell_volume)
      throw consistency_error(
          "component facet mismatch: lattice area disagrees with cell volume");

    // Cross-check 2: the log discrepancy of the component on the product
    // family equals b (1 + log_disc).
    RatVec w(n);
    for (int i = 0; i < n; ++i) w[i] = Rat(comp.multiplicity) * comp.weight[i];
    if (P.log_discrepancy_product(w, Rat(comp.multiplicity)) !=
        Rat(comp.multiplicity) * (1 + comp.log_disc))
      throw consistency_error("product discrepancy mismatch");

    cfg.components.push_back(std::move(comp));
  }
  if (mass_total != 1) throw consistency_error("mass mismatch");
  return cfg;
}

Rat boundary_lattice_integral(const MomentPolytope& P,
                              const PLConvexFunction& f) {
  const int n = P.n();
  Rat total(0);
  std::vector<Polytope> sides = P.poly().facet_polytopes();
  if (n == 1) {
    for (const Polytope& pt : sides)
      total += f.value(pt.vertices().front()) * pt.volume_in_hull();
    return total;
  }
  for (const Polytope& side : sides) {
    const RatVec& p = side.vertices()[0];
    const RatVec& q = side.vertices()[1];
    const Rat latlen = side.volume_in_hull();
    for (const PLCell& cell : f.cells()) {
      SegmentClip clip = clip_segment(cell.region, p, q);
      if (!clip.nonempty) continue;
      const Rat tmid = (clip.t0 + clip.t1) / 2;
      RatVec mid(n);
      for (int i = 0; i < n; ++i) mid[i] = p[i] + tmid * (q[i] - p[i]);
      total += (clip.t1 - clip.t0) * latlen *
               affine_value(cell.slope, cell.offset, mid);
    }
  }
  return total;
}

Rat na_energy(const ToricTestConfig& cfg) {
  const Rat avg = cfg.f.average();
  if (cfg.roof.volume() != (cfg.height - avg) * cfg.moment.vol())
    throw consistency_error(
        "energy mismatch: roof volume disagrees with the PL mean");
  return avg;
}

Rat na_max(const ToricTestConfig& cfg) { return cfg.f.max_value(); }

Rat na_j(const ToricTestConfig& cfg) { return na_max(cfg) - na_energy(cfg); }

Rat na_i(const ToricTestConfig& cfg) {
  Rat paired(0);
  for (const NAComponent& comp : cfg.components)
    paired += comp.mass * comp.pairing;
  return na_max(cfg) - paired;
}

Rat na_entropy(const ToricTestConfig& cfg) {
  Rat route1(0);
  for (const NAComponent& comp : cfg.components)
    route1 += comp.mass * comp.log_disc;

  // Independent route through the roof polytope: integrate the roof height
  // over the boundary of P, then remove the fan support values of all roof
  // facets weighted by their lattice areas.
  const int n = cfg.moment.n();
  const Rat nfact = factorial(n);
  const Rat term1 =
      -nfact * (cfg.height * lattice_boundary_volume(cfg.moment.poly()) -
                boundary_lattice_integral(cfg.moment, cfg.f));
  Rat term2(0);
  const auto& faces = cfg.roof.facets();
  std::vector<Polytope> face_polys = cfg.roof.facet_polytopes();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    RatVec w(n);
    bool zero = true;
    for (int k = 0; k < n; ++k) {
      w[k] = Rat(faces[i].normal[k]);
      if (w[k] != 0) zero = false;
    }
    if (zero) continue;
    term2 += -cfg.moment.log_discrepancy(w) * nfact *
             face_polys[i].volume_in_hull();
  }
  const Rat route2 = (term1 - term2) / cfg.moment.degree();
  if (route1 != route2)
    throw consistency_error("entropy mismatch: " + rat_to_string(route1) +
                            " vs " + rat_to_string(route2));
  return route1;
}

Rat na_mabuchi(const ToricTestConfig& cfg) {
  return boundary_lattice_integral(cfg.moment, cfg.f) / cfg.moment.vol() -
         cfg.moment.sbar() * na_energy(cfg);
}

Rat na_ricci(const ToricTestConfig& cfg) {
  return na_mabuchi(cfg) - na_entropy(cfg) -
         cfg.moment.sbar() * na_energy(cfg);
}

Rat donaldson_futaki(const ToricTestConfig& cfg) {
  Rat correction(0);
  for (const NAComponent& comp : cfg.components)
    correction += (1 - Rat(Int(1), comp.multiplicity)) * comp.mass;
  return na_mabuchi(cfg) + correction;
}

NADing na_ding(const ToricTestConfig& cfg) {
  if (!cfg.moment.reflexive_translate())
    throw domain_error(
        "not anticanonical: the moment polytope has no reflexive translate");
  NADing out;
  const Rat e = na_energy(cfg);
  out.l_part = std::min(na_max(cfg), Rat(na_mabuchi(cfg) + e));
  out.ding = out.l_part - e;
  return out;
}

NAFunctionalReport na_report(const ToricTestConfig& cfg) {
  NAFunctionalReport rep;
  rep.volume = cfg.moment.vol();
  rep.sbar = cfg.moment.sbar();
  rep.max_f = na_max(cfg);
  rep.energy = na_energy(cfg);
  rep.j_norm = na_j(cfg);
  rep.i_norm = na_i(cfg);
  rep.entropy = na_entropy(cfg);
  rep.mabuchi = na_mabuchi(cfg);
  rep.ricci = na_ricci(cfg);
  rep.df = donaldson_futaki(cfg);
  if (cfg.moment.reflexive_translate()) {
    NADing ding = na_ding(cfg);
    rep.has_ding = true;
    rep.l_part = ding.l_part;
    rep.ding = ding.ding;
  }
  return rep;
}

ThresholdResult stability_threshold(
    const MomentPolytope& P, const std::vector<std::vector<Rat>>& family) {
  if (P.n() != 1)
    throw input_error("stability scan supports one-dimensional polytopes");
  if (family.empty()) throw domain_error("infeasible");

  Rat lo = P.poly().vertices().front()[0], hi = lo;
  for (const RatVec& v : P.poly().vertices()) {
    lo = std::min(lo, v[0]);
    hi = std::max(hi, v[0]);
  }
  const Rat vol = hi - lo;

  bool have = false;
  ThresholdResult best;
  for (const std::vector<Rat>& bps : family) {
    std::vector<Rat> nodes = {lo};
    for (const Rat& b : bps)
      if (b > lo && b < hi) nodes.push_back(b);
    nodes.push_back(hi);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    const std::size_t k = nodes.size();

    std::vector<Rat> len(k - 1);
    for (std::size_t i = 0; i + 1 < k; ++i) len[i] = nodes[i + 1] - nodes[i];

    for (int side = 0; side < 2; ++side) {
      const std::size_t peak = side == 0 ? 0 : k - 1;
      const std::size_t other = side == 0 ? k - 1 : 0;
      LPProblem lp;
      lp.nvars = k;
      lp.nonneg = false;
      lp.c.assign(k, Rat(0));
      lp.c[0] += 1 / vol;
      lp.c[k - 1] += 1 / vol;
      // Nondecreasing slopes across each interior node.
      for (std::size_t i = 1; i + 1 < k; ++i) {
        LPConstraint row;
        row.a.assign(k, Rat(0));
        row.a[i - 1] += len[i];
        row.a[i] -= len[i] + len[i - 1];
        row.a[i + 1] += len[i - 1];
        row.rel = Rel::GE;
        row.b = 0;
        lp.rows.push_back(std::move(row));
      }
      // Zero mean (trapezoid rule is exact for PL functions).
      {
        LPConstraint row;
        row.a.assign(k, Rat(0));
        for (std::size_t i = 0; i < k; ++i) {
          if (i > 0) row.a[i] += len[i - 1] / 2;
          if (i + 1 < k) row.a[i] += len[i] / 2;
        }
        row.rel = Rel::EQ;
        row.b = 0;
        lp.rows.push_back(std::move(row));
      }
      // Normalization: the peak end equals 1 and is the max.
      {
        LPConstraint row;
        row.a.assign(k, Rat(0));
        row.a[peak] = 1;
        row.rel = Rel::EQ;
        row.b = 1;
        lp.rows.push_back(std::move(row));
      }
      {
        LPConstraint row;
        row.a.assign(k, Rat(0));
        row.a[other] = 1;
        row.rel = Rel::LE;
        row.b = 1;
        lp.rows.push_back(std::move(row));
      }
      LPSolution sol = solve_lp(lp);
      if (sol.status == LPStatus::Unbounded)
        throw consistency_error("unbounded threshold program");
      if (sol.status != LPStatus::Optimal) continue;
      if (!have || sol.value < best.delta) {
        have = true;
        best.delta = sol.value;
        best.nodes = nodes;
        best.values = sol.x;
      }
    }
  }
  if (!have) throw domain_error("infeasible");
  return best;
}

}  // namespace toric
