#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hhf/report.hpp"

namespace hhf {

enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitInvalidConfig = 2,
  kExitSolverFailure = 3,
  kExitCapExceeded = 4,
};

struct RunConfig {
  int d = 1;
  int L = 4;
  std::vector<int> lengths;
  double g = 2.0;
  std::optional<double> tol;  // default 1e-12 for the gap, 1e-9 for identities
  double epsilon = 0.25;
  int fock_cap = kDefaultFockCap;
  std::string format;  // json | csv; empty picks json for reports and csv for sweeps
  std::uint64_t seed = 1;
  int perturbations = 200;
  bool timings = false;

  double gap_tol() const { return tol.value_or(1e-12); }
  double identity_tol() const { return tol.value_or(1e-9); }
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws ConfigError describing the first violated constraint.
void validate(const RunConfig& cfg);
Json config_json(const RunConfig& cfg);

ReportDocument cmd_gap(const RunConfig& cfg);

struct VerifyOutcome {
  ReportDocument doc;
  bool cap_exceeded = false;
  std::string cap_message;

  int exit_code() const { return cap_exceeded ? kExitCapExceeded : (doc.passed() ? kExitPass : kExitFail); }
};

// which: wick | thm1 | thm2 | thm3 | car | hf | all
VerifyOutcome cmd_verify(const RunConfig& cfg, const std::string& which);

SweepResult cmd_sweep(const RunConfig& cfg);

// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hhf
