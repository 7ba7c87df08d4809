#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "curlsob/field.hpp"

namespace curlsob {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitThreshold = 2 };

struct RunConfig {
  std::string command;
  int n = 64;
  double L = 8.0;
  std::optional<double> tol;      // per-command default when unset
  std::optional<int> max_iter;    // per-command default when unset
  std::uint64_t seed = 42;
  double eps_reg = 1e-8;
  std::optional<Eigen::Vector3d> w;
  std::optional<Spinor> eta;
  std::string in;
  std::string out;
  std::string init;
  std::string json;
  int starts = 1;
  int recenter_every = 10;
  long samples = 1000000;
  std::string sign = "minus";
};

/// Rejects invalid values with std::invalid_argument before any computation.
void validate(const RunConfig& cfg);

int cmd_verify_optimizer(const RunConfig& cfg);
int cmd_minimize(const RunConfig& cfg);
int cmd_gauge_fix(const RunConfig& cfg);
int cmd_conformal_check(const RunConfig& cfg);
int cmd_improved(const RunConfig& cfg);
int cmd_zero_mode(const RunConfig& cfg);

/// Dispatches cfg.command; every failure maps to an exit code, nothing propagates.
int run_command(const RunConfig& cfg);

/// Full command line: parses flags and runs the subcommand.
int cli_main(int argc, const char* const* argv);

}  // namespace curlsob
