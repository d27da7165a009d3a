#pragma once

#include <stdexcept>
#include <string>

namespace toric {

// Exception hierarchy mapped to CLI exit codes:
//   input_error       -> 2  (malformed input, schema violations, bad flags)
//   domain_error      -> 3  (mathematically invalid request: non-convex data,
//                            infeasible programs, non-anticanonical polytope, ...)
//   consistency_error -> 4  (two independent internal computations disagree)
struct toric_error : std::runtime_error {
  explicit toric_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct input_error : toric_error {
  explicit input_error(const std::string& msg) : toric_error(msg) {}
};

struct domain_error : toric_error {
  explicit domain_error(const std::string& msg) : toric_error(msg) {}
};

struct consistency_error : toric_error {
  explicit consistency_error(const std::string& msg) : toric_error(msg) {}
};

}  // namespace toric
