#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rys/catalog.hpp"
#include "rys/identities.hpp"
#include "rys/report.hpp"

namespace rys::app {

inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  /// Case or entry names; "all" (or nothing) selects every case.
  std::vector<std::string> cases;
  ParamOverrides params;
  std::size_t points = 200;
  std::uint64_t seed = 7;
  Tolerances tolerances;
  int resolution = 24;
  std::optional<std::string> output;
  bool timing = false;

  /// Sphere radius for the "sphere" entry; scale for the solver backgrounds.
  std::optional<double> radius;
  // solve
  std::string background = "flat";
  int grid = 128;
  std::optional<double> r_max;
  std::string ansatz = "free";
};

struct CommandResult {
  int exit_code = kExitPass;
  /// JSON report (verify, integrate), CSV (solve) or listing (catalog).
  std::string output;
  /// One-line human summary or the usage error.
  std::string message;
};

CommandResult run_verify(const RunConfig& config);
CommandResult run_integrate(const RunConfig& config);
CommandResult run_solve(const RunConfig& config);
CommandResult run_catalog();

/// The verify report without touching the filesystem (used by run_verify).
CheckReport verify_report(const RunConfig& config);

}  // namespace rys::app
