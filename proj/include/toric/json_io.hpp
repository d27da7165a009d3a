#pragma once

// JSON serialization for the library's inputs and reports.  Rationals are
// encoded exactly as [num, den] with den > 0; doubles use the shortest
// representation that round-trips bit-identically.  Schema violations raise
// input_error with the offending field named in the message.

#include <string>

#include <json.hpp>

#include "toric/archimedean.hpp"
#include "toric/gitweights.hpp"
#include "toric/naconfig.hpp"
#include "toric/pl.hpp"
#include "toric/polytope.hpp"
#include "toric/potential.hpp"
#include "toric/rays.hpp"
#include "toric/snc.hpp"

namespace toric {

using Json = nlohmann::json;

// Parses text (or a file) as JSON; malformed input raises input_error.
Json parse_json(const std::string& text);
Json load_json_file(const std::string& path);

Json rat_to_json(const Rat& r);          // [num, den]
Rat rat_from_json(const Json& j);
Json ratvec_to_json(const RatVec& v);
RatVec ratvec_from_json(const Json& j);

// {"dim": n, "vertices": [[rat, ...], ...]}
Json polytope_to_json(const Polytope& p);
Polytope polytope_from_json(const Json& j);

// {"cells": [{"vertices": [[rat, ...], ...],
//             "affine": [a_1, ..., a_n, c]}, ...]}
// where each rational is a [num, den] pair and "affine" lists the cell's
// slope followed by its offset.
Json pl_to_json(const PLConvexFunction& f);
PLConvexFunction pl_from_json(const Polytope& domain, const Json& j);

// {"kind": "fs" | "lse-weights" | "grid", ...} with optional "shift": c and
// optional "bumps": [{"amp", "center", "width"}, ...].
//   fs          — weight-1 exponential sum over the lattice points of the
//                 context polytope (or an embedded "polytope" object).
//   lse-weights — {"scale": m, "points": [[rat, ...], ...], "logw": [...]}.
//   grid        — {"ys": [...], "ustar": [...]}, one-dimensional spline data.
PotentialPtr potential_from_json(const Json& j,
                                 const MomentPolytope* context = nullptr);

// {"rank": r, "vectors": [{"weights": [[int, ...], ...], "norms": [...]},
//  ...], "coeffs": [[num, den], ...]} with coeffs[i] scaling vectors[i].
LogNormFunction weights_from_json(const Json& j);

// {"n":, "p":, "b": [...], "eps":}; the twist is not serialized (flat).
SncModel snc_from_json(const Json& j);

Json report_to_json(const FunctionalReport& r);
FunctionalReport functional_report_from_json(const Json& j);

Json report_to_json(const NAFunctionalReport& r);
NAFunctionalReport na_report_from_json(const Json& j);

Json report_to_json(const SlopeReport& r);
SlopeReport slope_report_from_json(const Json& j);

}  // namespace toric
