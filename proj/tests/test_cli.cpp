#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "toric/json_io.hpp"
#include "toric/rays.hpp"

using namespace toric;

namespace {

const std::string& scratch_dir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/toric_cli_XXXXXX";
    const char* made = mkdtemp(tmpl);
    if (made == nullptr) throw std::runtime_error("cannot create scratch dir");
    return std::string(made);
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const std::string path = scratch_dir() + "/" + name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Runs the tool, captures stdout into `name`.out, returns the exit code.
int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  static int counter = 0;
  const std::string out = scratch_dir() + "/run" + std::to_string(counter++);
  const std::string cmd = std::string(TORIC_CLI_PATH) + " " + args + " > " +
                          out + " 2> " + out + ".err";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  if (stdout_text != nullptr) *stdout_text = read_file(out);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string poly01() {
  return write_file("poly01.json",
                    R"({"dim": 1, "vertices": [[[0,1]], [[1,1]]]})");
}

std::string pl_half() {
  return write_file("plhalf.json", R"({"cells": [
    {"vertices": [[[0,1]], [[1,2]]], "affine": [[0,1], [0,1]]},
    {"vertices": [[[1,2]], [[1,1]]], "affine": [[1,1], [-1,2]]}]})");
}

std::string pl_zero() {
  return write_file("plzero.json", R"({"cells": [
    {"vertices": [[[0,1]], [[1,1]]], "affine": [[0,1], [0,1]]}]})");
}

std::string sl2_weights() {
  return write_file("sl2.json", R"({"rank": 1,
    "vectors": [{"weights": [[1]], "norms": [1.0]},
                {"weights": [[-1]], "norms": [1.0]}],
    "coeffs": [[1,1], [-1,1]]})");
}

}  // namespace

TEST_CASE("the reference against itself reports zero functionals") {
  const std::string fs = write_file("fs.json", R"({"kind": "fs"})");
  std::string text;
  const int rc =
      run_cli("functionals " + fs + " " + fs + " " + poly01(), &text);
  REQUIRE(rc == 0);
  const FunctionalReport rep = functional_report_from_json(parse_json(text));
  CHECK(std::fabs(rep.energy) < 1e-12);
  CHECK(std::fabs(rep.j_norm) < 1e-12);
  CHECK(std::fabs(rep.i_norm) < 1e-12);
  CHECK(std::fabs(rep.entropy) < 1e-12);
  CHECK(std::fabs(rep.mabuchi) < 1e-12);
  CHECK(rep.sbar == doctest::Approx(2.0));
  CHECK(rep.volume == doctest::Approx(1.0));
}

TEST_CASE("a constant shift moves only the energy") {
  const std::string fs = write_file("fs.json", R"({"kind": "fs"})");
  const std::string fsc =
      write_file("fsc.json", R"({"kind": "fs", "shift": 0.7})");
  std::string text;
  REQUIRE(run_cli("functionals " + fsc + " " + fs + " " + poly01(), &text) ==
          0);
  const FunctionalReport rep = functional_report_from_json(parse_json(text));
  CHECK(rep.energy == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(std::fabs(rep.j_norm) < 1e-12);
}

TEST_CASE("the degeneration command reports exact rationals") {
  const std::string csv = scratch_dir() + "/na.csv";
  std::string text;
  const int rc = run_cli("na " + poly01() + " " + pl_half() +
                             " --delta 1/2 --csv " + csv,
                         &text);
  REQUIRE(rc == 0);
  const Json j = parse_json(text);
  const NAFunctionalReport rep = na_report_from_json(j);
  CHECK(rep.energy == Rat(1, 8));
  CHECK(rep.j_norm == Rat(3, 8));
  CHECK(rep.i_norm == Rat(3, 4));
  CHECK(rep.entropy == Rat(1, 2));
  CHECK(rep.mabuchi == Rat(1, 4));
  CHECK(rep.df == Rat(1, 4));
  CHECK(rat_from_json(j.at("delta_slack")) == Rat(1, 16));
  CHECK(read_file(csv) ==
        "volume,sbar,max_f,energy,j_norm,i_norm,entropy,ricci,mabuchi,df,"
        "delta,delta_slack\n"
        "1/1,2/1,1/2,1/8,3/8,3/4,1/2,-1/2,1/4,1/4,1/2,1/16\n");
}

TEST_CASE("the zero direction yields an all-zero degeneration report") {
  std::string text;
  REQUIRE(run_cli("na " + poly01() + " " + pl_zero(), &text) == 0);
  const NAFunctionalReport rep = na_report_from_json(parse_json(text));
  CHECK(rep.energy == 0);
  CHECK(rep.j_norm == 0);
  CHECK(rep.entropy == 0);
  CHECK(rep.df == 0);
}

TEST_CASE("failures map to the stable exit codes") {
  const std::string bad_json = write_file("bad.json", R"({"dim": 1,)");
  CHECK(run_cli("na " + bad_json + " " + pl_zero()) == 2);

  const std::string nonconvex = write_file("plbad.json", R"({"cells": [
    {"vertices": [[[0,1]], [[1,2]]], "affine": [[1,1], [0,1]]},
    {"vertices": [[[1,2]], [[1,1]]], "affine": [[0,1], [0,1]]}]})");
  CHECK(run_cli("na " + poly01() + " " + nonconvex) == 3);

  CHECK(run_cli("na /no/such/file.json " + pl_zero()) == 2);
  CHECK(run_cli("ray " + poly01() + " " + pl_half() + " --functional Q") == 2);
  CHECK(run_cli("nonsense") == 2);

  // Boundedness is only decided for character rank at most two.
  const std::string rank3 = write_file("rank3.json", R"({"rank": 3,
    "vectors": [{"weights": [[1,0,0]], "norms": [1.0]}],
    "coeffs": [[1,1]]})");
  CHECK(run_cli("weights " + rank3) == 3);
}

TEST_CASE("the ray command emits a verdict and plot data") {
  const std::string csv = scratch_dir() + "/ray.csv";
  std::string text;
  const int rc = run_cli("ray " + poly01() + " " + pl_half() +
                             " --functional E --s-min 10 --s-max 60 "
                             "--points 12 --csv " +
                             csv,
                         &text);
  REQUIRE(rc == 0);
  const SlopeReport rep = slope_report_from_json(parse_json(text));
  CHECK(rep.functional == "E");
  CHECK(rep.kind == "legendre");
  CHECK(rep.complete);
  CHECK(rep.pass);
  CHECK(rep.target == Rat(1, 8));
  CHECK(rep.slope == doctest::Approx(0.125).epsilon(1e-6));

  const std::string data = read_file(csv);
  CHECK(data.rfind("s,value,ratio\n", 0) == 0);
  CHECK(std::count(data.begin(), data.end(), '\n') == 13);
}

TEST_CASE("the weights command reports the exact slope and a witness") {
  std::string text;
  const int rc =
      run_cli("weights " + sl2_weights() + " --lambda 1 --trials 2", &text);
  REQUIRE(rc == 0);
  const Json j = parse_json(text);
  CHECK(rat_from_json(j.at("fna")) == Rat(-2));
  CHECK(j.at("slope_pass").get<bool>());
  CHECK_FALSE(j.at("bounded").get<bool>());
  CHECK(j.at("witness") == Json::array({1}));
  CHECK(rat_from_json(j.at("witness_value")) == Rat(-2));
  CHECK(j.at("conjugation").at("stable").get<bool>());
}

TEST_CASE("the snc command fits the growth exponent") {
  const std::string model =
      write_file("snc1.json", R"({"n": 1, "p": 1, "b": [1, 1], "eps": 0.1})");
  const std::string csv = scratch_dir() + "/snc.csv";
  std::string text;
  REQUIRE(run_cli("snc " + model + " --csv " + csv, &text) == 0);
  const Json j = parse_json(text);
  CHECK(std::fabs(j.at("dhat").get<double>() - 1.0) < 0.1);
  CHECK_FALSE(j.at("warn").get<bool>());
  CHECK(j.at("sandwich").get<double>() < 10.0);
  const std::string data = read_file(csv);
  CHECK(data.rfind("tau,volume\n", 0) == 0);
  CHECK(std::count(data.begin(), data.end(), '\n') == 9);
}

TEST_CASE("identical seeds give byte-identical csv output") {
  const std::string model =
      write_file("snc3.json", R"({"n": 3, "p": 1, "b": [2, 1], "eps": 0.1})");
  const std::string a = scratch_dir() + "/runa.csv";
  const std::string b = scratch_dir() + "/runb.csv";
  REQUIRE(run_cli("snc " + model + " --seed 5 --csv " + a) == 0);
  REQUIRE(run_cli("snc " + model + " --seed 5 --csv " + b) == 0);
  CHECK(read_file(a) == read_file(b));

  const std::string wa = scratch_dir() + "/wa.csv";
  const std::string wb = scratch_dir() + "/wb.csv";
  REQUIRE(run_cli("weights " + sl2_weights() + " --trials 8 --seed 3 --csv " +
                  wa) == 0);
  REQUIRE(run_cli("weights " + sl2_weights() + " --trials 8 --seed 3 --csv " +
                  wb) == 0);
  CHECK(read_file(wa) == read_file(wb));
}

TEST_CASE("the stability scan certifies the linear witness") {
  std::string text;
  REQUIRE(run_cli("scan " + poly01(), &text) == 0);
  const Json j = parse_json(text);
  CHECK(rat_from_json(j.at("delta_star")) == Rat(0));
  REQUIRE(j.at("nodes").size() == 2);  // no interior breakpoints: linear
  CHECK(rat_from_json(j.at("values")[0]) == Rat(1));
  CHECK(rat_from_json(j.at("values")[1]) == Rat(-1));

  REQUIRE(run_cli("scan " + poly01() + " --breaks 1/3,2/3", &text) == 0);
  CHECK(rat_from_json(parse_json(text).at("delta_star")) == Rat(0));
}

TEST_CASE("reports survive a json round trip") {
  const Polytope interval =
      Polytope::hull(1, {{Rat(0)}, {Rat(1)}});
  const MomentPolytope P(interval);
  const PLConvexFunction f = PLConvexFunction::from_affines(
      interval, {{{Rat(0)}, Rat(0)}, {{Rat(1)}, Rat(-1, 2)}});

  const NAFunctionalReport na = na_report(make_config(P, f));
  const NAFunctionalReport na2 =
      na_report_from_json(parse_json(report_to_json(na).dump()));
  CHECK(na2.volume == na.volume);
  CHECK(na2.energy == na.energy);
  CHECK(na2.j_norm == na.j_norm);
  CHECK(na2.i_norm == na.i_norm);
  CHECK(na2.entropy == na.entropy);
  CHECK(na2.ricci == na.ricci);
  CHECK(na2.mabuchi == na.mabuchi);
  CHECK(na2.df == na.df);
  CHECK(na2.has_ding == na.has_ding);

  const RaySpec spec = make_ray_spec(LsePotential::canonical_reference(P), f,
                                     "legendre", 0.0,
                                     geometric_grid(10.0, 40.0, 6));
  const SlopeReport slope = measure_slope(spec, "J");
  const SlopeReport slope2 =
      slope_report_from_json(parse_json(report_to_json(slope).dump()));
  CHECK(slope2.functional == slope.functional);
  CHECK(slope2.kind == slope.kind);
  CHECK(slope2.slope == slope.slope);  // bit-identical reals
  CHECK(slope2.extrapolation_error == slope.extrapolation_error);
  CHECK(slope2.target == slope.target);
  CHECK(slope2.pass == slope.pass);
  REQUIRE(slope2.samples.size() == slope.samples.size());
  for (std::size_t i = 0; i < slope.samples.size(); ++i) {
    CHECK(slope2.samples[i].s == slope.samples[i].s);
    CHECK(slope2.samples[i].value == slope.samples[i].value);
    CHECK(slope2.samples[i].ratio == slope.samples[i].ratio);
  }

  const Json pj = polytope_to_json(interval);
  CHECK(polytope_from_json(parse_json(pj.dump())).vertices() ==
        interval.vertices());
  const Json fj = pl_to_json(f);
  const PLConvexFunction f2 = pl_from_json(interval, parse_json(fj.dump()));
  for (long long k = 0; k <= 4; ++k)
    CHECK(f2.value({Rat(k, 4)}) == f.value({Rat(k, 4)}));
}

TEST_CASE("schema violations name the offending field") {
  CHECK_THROWS_WITH_AS(polytope_from_json(parse_json(R"({"dim": 1})")),
                       "missing field: vertices", input_error);
  CHECK_THROWS_WITH_AS(rat_from_json(parse_json(R"("x")")),
                       "expected a rational [num, den]", input_error);
  CHECK_THROWS_WITH_AS(rat_from_json(parse_json(R"([1, 0])")),
                       "rational with zero denominator", input_error);
  CHECK_THROWS_WITH_AS(
      weights_from_json(parse_json(
          R"({"rank": 1, "vectors": [{"weights": [[1]], "norms": [1.0]}],
              "coeffs": []})")),
      "coeffs must align with vectors", input_error);
  CHECK_THROWS_WITH_AS(
      potential_from_json(parse_json(R"({"kind": "mystery"})")),
      "unknown potential kind: mystery", input_error);
  CHECK_THROWS_WITH_AS(potential_from_json(parse_json(R"({"kind": "fs"})")),
                       "fs potential needs a polytope", input_error);
}
