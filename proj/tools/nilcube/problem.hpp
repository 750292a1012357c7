#pragma once

// JSON problem descriptions for the nilcube front end: parsing into library
// objects, dispatch by kind, and report rendering.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace nilcube {

using Json = nlohmann::json;

// A malformed or unresolvable problem; pointer is a JSON pointer into it.
class SpecError : public std::runtime_error {
 public:
  SpecError(std::string pointer, const std::string& what)
      : std::runtime_error(what), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

struct RunOptions {
  std::optional<int> n_max;      // overrides the problem's n_max
  std::size_t brute_cap = 12;    // largest |X| for brute-force translation search
  std::uint64_t seed = 1;        // randomized property suites only
};

enum ExitCode { kOk = 0, kMathFailure = 1, kSpecError = 2 };

struct RunResult {
  int exit_code = kOk;
  Json report;
};

// Never throws for bad input; spec errors come back with exit code 2 and
// {"error": {"path": ..., "message": ...}}.
RunResult run_problem(const Json& problem, const RunOptions& options = {});

// One "path: value" line per leaf, in key order.
std::string to_text(const Json& report);

}  // namespace nilcube
