#include "toric/json_io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "toric/errors.hpp"

namespace toric {

namespace {

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name))
    throw input_error(std::string("missing field: ") + name);
  return j.at(name);
}

long long int_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer())
    throw input_error(std::string("field must be an integer: ") + name);
  return v.get<long long>();
}

double number_of(const Json& v, const char* what) {
  if (!v.is_number())
    throw input_error(std::string("expected a number: ") + what);
  return v.get<double>();
}

std::vector<double> double_vec(const Json& v, const char* what) {
  if (!v.is_array())
    throw input_error(std::string("expected an array of numbers: ") + what);
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& e : v) out.push_back(number_of(e, what));
  return out;
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw input_error(std::string("invalid JSON: ") + e.what());
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

Json rat_to_json(const Rat& r) {
  return Json::array({to_int64_checked(num(r), "rational numerator"),
                      to_int64_checked(den(r), "rational denominator")});
}

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_array() && j.size() == 2 && j[0].is_number_integer() &&
      j[1].is_number_integer())
    return rat(j[0].get<long long>(), j[1].get<long long>());
  throw input_error("expected a rational [num, den]");
}

Json ratvec_to_json(const RatVec& v) {
  Json out = Json::array();
  for (const Rat& r : v) out.push_back(rat_to_json(r));
  return out;
}

RatVec ratvec_from_json(const Json& j) {
  if (!j.is_array()) throw input_error("expected an array of rationals");
  RatVec out;
  out.reserve(j.size());
  for (const Json& e : j) out.push_back(rat_from_json(e));
  return out;
}

Json polytope_to_json(const Polytope& p) {
  Json verts = Json::array();
  for (const RatVec& v : p.vertices()) verts.push_back(ratvec_to_json(v));
  return Json{{"dim", p.ambient_dim()}, {"vertices", std::move(verts)}};
}

Polytope polytope_from_json(const Json& j) {
  const long long dim = int_field(j, "dim");
  if (dim < 1 || dim > 3)
    throw input_error("polytope dimension must be 1, 2, or 3");
  const Json& verts = field(j, "vertices");
  if (!verts.is_array() || verts.empty())
    throw input_error("polytope needs a non-empty vertex list");
  std::vector<RatVec> points;
  points.reserve(verts.size());
  for (const Json& v : verts) {
    RatVec p = ratvec_from_json(v);
    if (static_cast<long long>(p.size()) != dim)
      throw input_error("polytope vertex does not match dim");
    points.push_back(std::move(p));
  }
  return Polytope::hull(static_cast<int>(dim), std::move(points));
}

Json pl_to_json(const PLConvexFunction& f) {
  Json cells = Json::array();
  for (const PLCell& c : f.cells()) {
    Json verts = Json::array();
    for (const RatVec& v : c.region.vertices())
      verts.push_back(ratvec_to_json(v));
    Json affine = ratvec_to_json(c.slope);
    affine.push_back(rat_to_json(c.offset));
    cells.push_back(Json{{"vertices", std::move(verts)},
                         {"affine", std::move(affine)}});
  }
  return Json{{"cells", std::move(cells)}};
}

PLConvexFunction pl_from_json(const Polytope& domain, const Json& j) {
  const Json& cells = field(j, "cells");
  if (!cells.is_array() || cells.empty())
    throw input_error("pl function needs a non-empty cell list");
  const int n = domain.ambient_dim();
  std::vector<PLCell> parsed;
  parsed.reserve(cells.size());
  for (const Json& c : cells) {
    RatVec affine = ratvec_from_json(field(c, "affine"));
    if (static_cast<int>(affine.size()) != n + 1)
      throw input_error("cell affine needs n slopes and an offset");
    const Json& verts = field(c, "vertices");
    if (!verts.is_array() || verts.empty())
      throw input_error("cell needs a non-empty vertex list");
    std::vector<RatVec> points;
    points.reserve(verts.size());
    for (const Json& v : verts) points.push_back(ratvec_from_json(v));
    PLCell cell;
    cell.region = Polytope::hull(n, std::move(points));
    cell.slope.assign(affine.begin(), affine.begin() + n);
    cell.offset = affine[n];
    parsed.push_back(std::move(cell));
  }
  return PLConvexFunction(domain, std::move(parsed));
}

PotentialPtr potential_from_json(const Json& j, const MomentPolytope* context) {
  const Json& kind_j = field(j, "kind");
  if (!kind_j.is_string()) throw input_error("potential kind must be a string");
  const std::string kind = kind_j.get<std::string>();

  PotentialPtr base;
  if (kind == "fs") {
    if (j.contains("polytope")) {
      base = LsePotential::canonical_reference(
          MomentPolytope(polytope_from_json(j.at("polytope"))));
    } else if (context != nullptr) {
      base = LsePotential::canonical_reference(*context);
    } else {
      throw input_error("fs potential needs a polytope");
    }
  } else if (kind == "lse-weights") {
    const Json& pts = field(j, "points");
    if (!pts.is_array() || pts.empty())
      throw input_error("lse-weights needs a non-empty point list");
    RatMat exponents;
    exponents.reserve(pts.size());
    for (const Json& p : pts) exponents.push_back(ratvec_from_json(p));
    VecD logw = double_vec(field(j, "logw"), "logw");
    long long scale = j.contains("scale") ? int_field(j, "scale") : 1;
    base = std::make_shared<LsePotential>(std::move(exponents),
                                          std::move(logw), scale);
  } else if (kind == "grid") {
    VecD ys = double_vec(field(j, "ys"), "ys");
    VecD ustar = double_vec(field(j, "ustar"), "ustar");
    base = std::make_shared<GridPotential>(std::move(ys), std::move(ustar));
  } else {
    throw input_error("unknown potential kind: " + kind);
  }

  if (j.contains("bumps")) {
    const Json& bs = j.at("bumps");
    if (!bs.is_array()) throw input_error("bumps must be an array");
    std::vector<BumpPotential::Bump> bumps;
    for (const Json& b : bs) {
      BumpPotential::Bump bump;
      bump.amp = number_of(field(b, "amp"), "bump amp");
      bump.center = double_vec(field(b, "center"), "bump center");
      bump.width = number_of(field(b, "width"), "bump width");
      bumps.push_back(std::move(bump));
    }
    base = std::make_shared<BumpPotential>(std::move(base), std::move(bumps));
  }
  if (j.contains("shift")) {
    base = std::make_shared<ShiftedPotential>(
        std::move(base), number_of(j.at("shift"), "shift"));
  }
  return base;
}

LogNormFunction weights_from_json(const Json& j) {
  const long long rank = int_field(j, "rank");
  if (rank < 1) throw input_error("weight rank must be positive");
  const Json& vecs = field(j, "vectors");
  const Json& coeffs = field(j, "coeffs");
  if (!vecs.is_array() || vecs.empty())
    throw input_error("weights need a non-empty vector list");
  if (!coeffs.is_array() || coeffs.size() != vecs.size())
    throw input_error("coeffs must align with vectors");

  LogNormFunction f;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const Json& ws = field(vecs[i], "weights");
    if (!ws.is_array() || ws.empty())
      throw input_error("vector needs a non-empty weight list");
    std::vector<IntVec> weights;
    weights.reserve(ws.size());
    for (const Json& row : ws) {
      if (!row.is_array() || static_cast<long long>(row.size()) != rank)
        throw input_error("weight entries do not match the declared rank");
      IntVec w;
      w.reserve(row.size());
      for (const Json& e : row) {
        if (!e.is_number_integer())
          throw input_error("weights must be integers");
        w.push_back(Int(e.get<long long>()));
      }
      weights.push_back(std::move(w));
    }
    VecD norms = double_vec(field(vecs[i], "norms"), "norms");
    f.terms.push_back(LogNormTerm{rat_from_json(coeffs[i]),
                                  WeightedVector(std::move(weights),
                                                 std::move(norms))});
  }
  return f;
}

SncModel snc_from_json(const Json& j) {
  SncModel m;
  m.n = static_cast<int>(int_field(j, "n"));
  m.p = static_cast<int>(int_field(j, "p"));
  const Json& bs = field(j, "b");
  if (!bs.is_array()) throw input_error("field b must be an integer array");
  m.b.clear();
  for (const Json& e : bs) {
    if (!e.is_number_integer())
      throw input_error("multiplicities must be integers");
    m.b.push_back(e.get<long long>());
  }
  m.eps = number_of(field(j, "eps"), "eps");
  return m;
}

Json report_to_json(const FunctionalReport& r) {
  return Json{{"energy", r.energy},       {"j_norm", r.j_norm},
              {"i_norm", r.i_norm},       {"entropy", r.entropy},
              {"ricci_energy", r.ricci_energy}, {"mabuchi", r.mabuchi},
              {"sbar", r.sbar},           {"volume", r.volume},
              {"quad_error", r.quad_error}};
}

FunctionalReport functional_report_from_json(const Json& j) {
  FunctionalReport r;
  r.energy = number_of(field(j, "energy"), "energy");
  r.j_norm = number_of(field(j, "j_norm"), "j_norm");
  r.i_norm = number_of(field(j, "i_norm"), "i_norm");
  r.entropy = number_of(field(j, "entropy"), "entropy");
  r.ricci_energy = number_of(field(j, "ricci_energy"), "ricci_energy");
  r.mabuchi = number_of(field(j, "mabuchi"), "mabuchi");
  r.sbar = number_of(field(j, "sbar"), "sbar");
  r.volume = number_of(field(j, "volume"), "volume");
  r.quad_error = number_of(field(j, "quad_error"), "quad_error");
  return r;
}

Json report_to_json(const NAFunctionalReport& r) {
  Json out{{"volume", rat_to_json(r.volume)},
           {"sbar", rat_to_json(r.sbar)},
           {"max_f", rat_to_json(r.max_f)},
           {"energy", rat_to_json(r.energy)},
           {"j_norm", rat_to_json(r.j_norm)},
           {"i_norm", rat_to_json(r.i_norm)},
           {"entropy", rat_to_json(r.entropy)},
           {"ricci", rat_to_json(r.ricci)},
           {"mabuchi", rat_to_json(r.mabuchi)},
           {"df", rat_to_json(r.df)},
           {"has_ding", r.has_ding}};
  if (r.has_ding) {
    out["l_part"] = rat_to_json(r.l_part);
    out["ding"] = rat_to_json(r.ding);
  }
  return out;
}

NAFunctionalReport na_report_from_json(const Json& j) {
  NAFunctionalReport r;
  r.volume = rat_from_json(field(j, "volume"));
  r.sbar = rat_from_json(field(j, "sbar"));
  r.max_f = rat_from_json(field(j, "max_f"));
  r.energy = rat_from_json(field(j, "energy"));
  r.j_norm = rat_from_json(field(j, "j_norm"));
  r.i_norm = rat_from_json(field(j, "i_norm"));
  r.entropy = rat_from_json(field(j, "entropy"));
  r.ricci = rat_from_json(field(j, "ricci"));
  r.mabuchi = rat_from_json(field(j, "mabuchi"));
  r.df = rat_from_json(field(j, "df"));
  const Json& hd = field(j, "has_ding");
  if (!hd.is_boolean()) throw input_error("field must be boolean: has_ding");
  r.has_ding = hd.get<bool>();
  if (r.has_ding) {
    r.l_part = rat_from_json(field(j, "l_part"));
    r.ding = rat_from_json(field(j, "ding"));
  }
  return r;
}

Json report_to_json(const SlopeReport& r) {
  Json samples = Json::array();
  for (const SlopeSample& s : r.samples)
    samples.push_back(
        Json{{"s", s.s}, {"value", s.value}, {"ratio", s.ratio}});
  return Json{{"functional", r.functional},
              {"kind", r.kind},
              {"samples", std::move(samples)},
              {"slope", r.slope},
              {"extrapolation_error", r.extrapolation_error},
              {"target", rat_to_json(r.target)},
              {"complete", r.complete},
              {"pass", r.pass}};
}

SlopeReport slope_report_from_json(const Json& j) {
  SlopeReport r;
  const Json& fn = field(j, "functional");
  const Json& kd = field(j, "kind");
  if (!fn.is_string() || !kd.is_string())
    throw input_error("functional and kind must be strings");
  r.functional = fn.get<std::string>();
  r.kind = kd.get<std::string>();
  for (const Json& s : field(j, "samples")) {
    SlopeSample sample;
    sample.s = number_of(field(s, "s"), "s");
    sample.value = number_of(field(s, "value"), "value");
    sample.ratio = number_of(field(s, "ratio"), "ratio");
    r.samples.push_back(sample);
  }
  r.slope = number_of(field(j, "slope"), "slope");
  r.extrapolation_error =
      number_of(field(j, "extrapolation_error"), "extrapolation_error");
  r.target = rat_from_json(field(j, "target"));
  const Json& cm = field(j, "complete");
  const Json& ps = field(j, "pass");
  if (!cm.is_boolean() || !ps.is_boolean())
    throw input_error("complete and pass must be booleans");
  r.complete = cm.get<bool>();
  r.pass = ps.get<bool>();
  return r;
}

}  // namespace toric
