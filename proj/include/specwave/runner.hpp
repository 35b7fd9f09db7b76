#pragma once

#include <string>
#include <vector>

#include "specwave/config.hpp"

namespace specwave {

// Exit-status contract: 0 all verdicts pass, 2 config error, 3 numerical
// blow-up, 4 verdict failure.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitBlowup = 3,
  kExitVerdictFailure = 4,
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunReport {
  std::string subcommand;
  std::vector<Verdict> verdicts;
  int exit_code = kExitOk;

  // eigensystem summary
  int m_modes = 0;
  double weight_min = 0.0, weight_max = 0.0;
  double max_residual = 0.0;
  double biorth_residual = 0.0;
  double shift_c = 0.0;

  double wall_seconds = 0.0;
  std::string config_echo;

  bool all_pass() const;
};

// Executes one subcommand ("spectrum", "transform-check", "solve", "verify",
// "veryweak") against the config; CSV artifacts and report.json land in
// out_dir. Wall time appears only in the report header, never in CSV bodies.
RunReport run(const ExperimentConfig& cfg, const std::string& subcommand,
              const std::string& out_dir);

void write_report(const RunReport& rep, const std::string& out_dir);

}  // namespace specwave
