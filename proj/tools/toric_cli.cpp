// Command-line laboratory for toric energy functionals: Archimedean and
// non-Archimedean functional reports, ray slope measurements, weight
// boundedness decisions, fiber-volume asymptotics, and stability scans.
// Every command emits a JSON report (stdout or --out) and optional
// plot-ready CSV (--csv); runs are deterministic given --seed.
//
// Exit codes: 0 success, 2 malformed input, 3 mathematically invalid
// request, 4 internal consistency failure.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "toric/errors.hpp"
#include "toric/json_io.hpp"

namespace {

using namespace toric;

std::string fmt_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string fmt_rat(const Rat& r) {
  return num(r).str() + "/" + den(r).str();
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write file: " + path);
  out << text;
}

void emit_json(const Json& j, const std::string& path) {
  emit(j.dump(2) + "\n", path);
}

Rat parse_rat_arg(const std::string& s) {
  const auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(std::stoll(s));
    return rat(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
  } catch (const input_error&) {
    throw;
  } catch (const std::exception&) {
    throw input_error("invalid rational: " + s);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

MomentPolytope load_moment(const std::string& path) {
  return MomentPolytope(polytope_from_json(load_json_file(path)));
}

// ---------------------------------------------------------------- functionals

int cmd_functionals(const std::string& potential_path,
                    const std::string& ref_path,
                    const std::string& polytope_path, const std::string& out,
                    const std::string& csv) {
  const MomentPolytope P = load_moment(polytope_path);
  const PotentialPtr u = potential_from_json(load_json_file(potential_path), &P);
  const PotentialPtr ref = potential_from_json(load_json_file(ref_path), &P);
  if (u->polytope().poly().vertices() != P.poly().vertices())
    throw input_error("potential does not match the polytope");
  FunctionalEngine engine(u, ref);
  const FunctionalReport rep = engine.report();
  emit_json(report_to_json(rep), out);
  if (!csv.empty()) {
    std::string text =
        "energy,j_norm,i_norm,entropy,ricci_energy,mabuchi,sbar,volume,"
        "quad_error\n";
    text += fmt_double(rep.energy) + "," + fmt_double(rep.j_norm) + "," +
            fmt_double(rep.i_norm) + "," + fmt_double(rep.entropy) + "," +
            fmt_double(rep.ricci_energy) + "," + fmt_double(rep.mabuchi) +
            "," + fmt_double(rep.sbar) + "," + fmt_double(rep.volume) + "," +
            fmt_double(rep.quad_error) + "\n";
    emit(text, csv);
  }
  return 0;
}

// ------------------------------------------------------------------------- na

int cmd_na(const std::string& polytope_path, const std::string& pl_path,
           const std::string& delta_str, const std::string& out,
           const std::string& csv) {
  const MomentPolytope P = load_moment(polytope_path);
  const PLConvexFunction f = pl_from_json(P.poly(), load_json_file(pl_path));
  const ToricTestConfig cfg = make_config(P, f);
  const NAFunctionalReport rep = na_report(cfg);
  Json j = report_to_json(rep);
  std::string delta_cols, delta_vals;
  if (!delta_str.empty()) {
    const Rat delta = parse_rat_arg(delta_str);
    const Rat slack = rep.df - delta * rep.j_norm;
    j["delta"] = rat_to_json(delta);
    j["delta_slack"] = rat_to_json(slack);
    delta_cols = ",delta,delta_slack";
    delta_vals = "," + fmt_rat(delta) + "," + fmt_rat(slack);
  }
  emit_json(j, out);
  if (!csv.empty()) {
    std::string text =
        "volume,sbar,max_f,energy,j_norm,i_norm,entropy,ricci,mabuchi,df" +
        delta_cols + "\n";
    text += fmt_rat(rep.volume) + "," + fmt_rat(rep.sbar) + "," +
            fmt_rat(rep.max_f) + "," + fmt_rat(rep.energy) + "," +
            fmt_rat(rep.j_norm) + "," + fmt_rat(rep.i_norm) + "," +
            fmt_rat(rep.entropy) + "," + fmt_rat(rep.ricci) + "," +
            fmt_rat(rep.mabuchi) + "," + fmt_rat(rep.df) + delta_vals + "\n";
    emit(text, csv);
  }
  return 0;
}

// ------------------------------------------------------------------------ ray

int cmd_ray(const std::string& polytope_path, const std::string& pl_path,
            const std::string& functional, const std::string& kind,
            double s_min, double s_max, int points, double smoothing,
            const std::string& out, const std::string& csv) {
  static const std::vector<std::string> allowed = {"E", "I", "J",
                                                   "R", "M", "D"};
  if (std::find(allowed.begin(), allowed.end(), functional) == allowed.end())
    throw input_error("unknown functional: " + functional);
  if (kind != "legendre" && kind != "bergman")
    throw input_error("unknown ray kind: " + kind);
  if (points < 4) throw input_error("ray needs at least four grid points");
  const MomentPolytope P = load_moment(polytope_path);
  const PLConvexFunction f = pl_from_json(P.poly(), load_json_file(pl_path));
  const PotentialPtr base = LsePotential::canonical_reference(P);
  const RaySpec spec = make_ray_spec(base, f, kind, smoothing,
                                     geometric_grid(s_min, s_max, points));
  const SlopeReport rep = measure_slope(spec, functional);
  emit_json(report_to_json(rep), out);
  if (!csv.empty()) {
    std::string text = "s,value,ratio\n";
    for (const SlopeSample& s : rep.samples)
      text += fmt_double(s.s) + "," + fmt_double(s.value) + "," +
              fmt_double(s.ratio) + "\n";
    emit(text, csv);
  }
  return 0;
}

// -------------------------------------------------------------------- weights

int cmd_weights(const std::string& weights_path, const std::string& lambda_str,
                int trials, unsigned long long seed, const std::string& out,
                const std::string& csv) {
  const LogNormFunction f = weights_from_json(load_json_file(weights_path));
  const BoundednessReport br = bounded_below_torus(f);

  Json j{{"rank", f.rank()},
         {"bounded", br.bounded},
         {"routes",
          Json{{"inclusion", br.inclusion},
               {"fan_scan", br.fan_scan},
               {"feasibility", br.feasibility}}},
         {"scan_min", rat_to_json(br.scan_min)}};
  std::vector<std::pair<std::string, std::string>> rows = {
      {"rank", std::to_string(f.rank())},
      {"bounded", br.bounded ? "1" : "0"},
      {"scan_min", fmt_rat(br.scan_min)}};
  if (!br.bounded) {
    Json w = Json::array();
    std::string wtxt;
    for (const Int& e : br.witness) {
      w.push_back(to_int64_checked(e, "witness entry"));
      wtxt += (wtxt.empty() ? "" : " ") + e.str();
    }
    j["witness"] = std::move(w);
    j["witness_value"] = rat_to_json(br.witness_value);
    rows.push_back({"witness", wtxt});
    rows.push_back({"witness_value", fmt_rat(br.witness_value)});
  }

  if (!lambda_str.empty()) {
    OneParamSubgroup lam;
    for (const std::string& tok : split(lambda_str, ',')) {
      try {
        lam.push_back(Int(std::stoll(tok)));
      } catch (const std::exception&) {
        throw input_error("invalid cocharacter entry: " + tok);
      }
    }
    const SlopeAgreement sa = slope_vs_fNA(f, lam);
    j["fna"] = rat_to_json(sa.exact);
    j["slope"] = sa.slope;
    j["slope_diff"] = sa.diff;
    j["slope_pass"] = sa.pass;
    rows.push_back({"fna", fmt_rat(sa.exact)});
    rows.push_back({"slope", fmt_double(sa.slope)});
  }

  if (trials > 0) {
    const ConjugationReport cp = conjugated_probe(f, trials, seed);
    j["conjugation"] = Json{{"trials", cp.trials},
                            {"stable", cp.stable},
                            {"bounded", cp.bounded},
                            {"bounded_count", cp.bounded_count},
                            {"min_fna", cp.min_fna}};
    rows.push_back({"conjugation_stable", cp.stable ? "1" : "0"});
    rows.push_back({"conjugation_min_fna", fmt_double(cp.min_fna)});
  }

  emit_json(j, out);
  if (!csv.empty()) {
    std::string text = "key,value\n";
    for (const auto& [k, v] : rows) text += k + "," + v + "\n";
    emit(text, csv);
  }
  return 0;
}

// ------------------------------------------------------------------------ snc

int cmd_snc(const std::string& model_path, double tau_lo, double tau_hi,
            int tau_points, unsigned long long seed, const std::string& out,
            const std::string& csv) {
  const SncModel m = snc_from_json(load_json_file(model_path));
  if (!(tau_lo > 0) || !(tau_hi > tau_lo))
    throw input_error("tau grid needs 0 < tau-lo < tau-hi");
  if (tau_points < 4) throw input_error("tau grid needs at least four points");
  const std::vector<double> taus = geometric_grid(tau_lo, tau_hi, tau_points);

  std::vector<double> vols;
  vols.reserve(taus.size());
  for (double tau : taus) vols.push_back(fiber_volume(m, tau, seed));
  const ExponentFit fit = exponent_fit(m, taus, seed);
  const double sandwich = sandwich_ratio(m, taus, seed);

  Json j{{"n", m.n},           {"p", m.p},
         {"dhat", fit.dhat},   {"residual", fit.residual},
         {"warn", fit.warn},   {"sandwich", sandwich},
         {"taus", taus},       {"volumes", vols}};
  emit_json(j, out);
  if (!csv.empty()) {
    std::string text = "tau,volume\n";
    for (std::size_t i = 0; i < taus.size(); ++i)
      text += fmt_double(taus[i]) + "," + fmt_double(vols[i]) + "\n";
    emit(text, csv);
  }
  return 0;
}

// ----------------------------------------------------------------------- scan

int cmd_scan(const std::string& polytope_path,
             const std::vector<std::string>& break_sets,
             const std::string& out, const std::string& csv) {
  const MomentPolytope P = load_moment(polytope_path);
  std::vector<std::vector<Rat>> family = {{}};
  if (break_sets.empty()) {
    Rat lo = P.poly().vertices().front()[0], hi = lo;
    for (const RatVec& v : P.poly().vertices()) {
      lo = std::min(lo, v[0]);
      hi = std::max(hi, v[0]);
    }
    family.push_back({(lo + hi) / 2});
  } else {
    for (const std::string& set : break_sets) {
      std::vector<Rat> nodes;
      for (const std::string& tok : split(set, ','))
        nodes.push_back(parse_rat_arg(tok));
      family.push_back(std::move(nodes));
    }
  }
  const ThresholdResult res = stability_threshold(P, family);

  Json nodes = Json::array(), values = Json::array();
  for (const Rat& r : res.nodes) nodes.push_back(rat_to_json(r));
  for (const Rat& r : res.values) values.push_back(rat_to_json(r));
  emit_json(Json{{"delta_star", rat_to_json(res.delta)},
                 {"nodes", std::move(nodes)},
                 {"values", std::move(values)}},
            out);
  if (!csv.empty()) {
    std::string text = "node,value\n";
    for (std::size_t i = 0; i < res.nodes.size(); ++i)
      text += fmt_rat(res.nodes[i]) + "," + fmt_rat(res.values[i]) + "\n";
    emit(text, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Toric energy-functional laboratory: functional reports, degeneration "
      "invariants, ray slopes, weight boundedness, fiber asymptotics, and "
      "stability scans."};
  app.require_subcommand(1);

  std::string out_path, csv_path;
  unsigned long long seed = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Write the JSON report here");
    cmd->add_option("--csv", csv_path, "Write plot-ready CSV here");
    cmd->add_option("--seed", seed, "Random seed for sampled quantities");
  };

  // functionals
  std::string potential_path, ref_path, polytope_path, pl_path;
  CLI::App* functionals = app.add_subcommand(
      "functionals",
      "Archimedean functional report of a potential against a reference. "
      "CSV columns: energy,j_norm,i_norm,entropy,ricci_energy,mabuchi,sbar,"
      "volume,quad_error");
  functionals->add_option("potential", potential_path, "Potential JSON")
      ->required();
  functionals->add_option("ref", ref_path, "Reference potential JSON")
      ->required();
  functionals->add_option("polytope", polytope_path, "Moment polytope JSON")
      ->required();
  add_common(functionals);

  // na
  std::string delta_str;
  CLI::App* na = app.add_subcommand(
      "na",
      "Exact functional invariants of the degeneration attached to a convex "
      "PL function. CSV columns: volume,sbar,max_f,energy,j_norm,i_norm,"
      "entropy,ricci,mabuchi,df[,delta,delta_slack]");
  na->add_option("polytope", polytope_path, "Moment polytope JSON")->required();
  na->add_option("pl", pl_path, "Convex PL function JSON")->required();
  na->add_option("--delta", delta_str,
                 "Rational a/b: also report df - delta * j_norm");
  add_common(na);

  // ray
  std::string functional = "M", kind = "legendre";
  double s_min = 10.0, s_max = 200.0, smoothing = 0.0;
  int points = 24;
  CLI::App* ray = app.add_subcommand(
      "ray",
      "Slope of a functional along the ray attached to a convex PL "
      "direction, against its exact target. CSV columns: s,value,ratio");
  ray->add_option("polytope", polytope_path, "Moment polytope JSON")
      ->required();
  ray->add_option("pl", pl_path, "Convex PL direction JSON")->required();
  ray->add_option("--functional", functional, "One of E, I, J, R, M, D");
  ray->add_option("--kind", kind, "Ray kind: legendre or bergman");
  ray->add_option("--s-min", s_min, "Smallest ray parameter");
  ray->add_option("--s-max", s_max, "Largest ray parameter");
  ray->add_option("--points", points, "Grid size");
  ray->add_option("--smoothing", smoothing,
                  "Soft-max smoothing of the PL kinks (legendre kind)");
  add_common(ray);

  // weights
  std::string weights_path, lambda_str;
  int trials = 0;
  CLI::App* weights = app.add_subcommand(
      "weights",
      "Boundedness of a weighted log-norm function over the torus, with "
      "optional cocharacter slope and conjugation probe. CSV columns: "
      "key,value");
  weights->add_option("weights", weights_path, "Weight data JSON")->required();
  weights->add_option("--lambda", lambda_str,
                      "Comma-separated cocharacter, e.g. 1,-1");
  weights->add_option("--trials", trials,
                      "Random conjugation trials (0 = skip)");
  add_common(weights);

  // snc
  std::string model_path;
  double tau_lo = 1e-9, tau_hi = 1e-2;
  int tau_points = 8;
  CLI::App* snc = app.add_subcommand(
      "snc",
      "Fiber volumes of a normal-crossing model over a geometric tau grid, "
      "with the fitted growth exponent. CSV columns: tau,volume");
  snc->add_option("model", model_path, "Model JSON")->required();
  snc->add_option("--tau-lo", tau_lo, "Smallest tau");
  snc->add_option("--tau-hi", tau_hi, "Largest tau");
  snc->add_option("--tau-points", tau_points, "Grid size");
  add_common(snc);

  // scan
  std::vector<std::string> break_sets;
  CLI::App* scan = app.add_subcommand(
      "scan",
      "Minimal Donaldson-Futaki value over normalized convex PL functions "
      "on the given breakpoint families. CSV columns: node,value");
  scan->add_option("polytope", polytope_path, "Moment polytope JSON")
      ->required();
  scan->add_option("--breaks", break_sets,
                   "Interior breakpoints, comma-separated rationals; "
                   "repeatable. Default: none and the midpoint");
  add_common(scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (functionals->parsed())
      return cmd_functionals(potential_path, ref_path, polytope_path, out_path,
                             csv_path);
    if (na->parsed())
      return cmd_na(polytope_path, pl_path, delta_str, out_path, csv_path);
    if (ray->parsed())
      return cmd_ray(polytope_path, pl_path, functional, kind, s_min, s_max,
                     points, smoothing, out_path, csv_path);
    if (weights->parsed())
      return cmd_weights(weights_path, lambda_str, trials, seed, out_path,
                         csv_path);
    if (snc->parsed())
      return cmd_snc(model_path, tau_lo, tau_hi, tau_points, seed, out_path,
                     csv_path);
    if (scan->parsed())
      return cmd_scan(polytope_path, break_sets, out_path, csv_path);
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const consistency_error& e) {
    std::cerr << "consistency error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
