#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lwr/cli/config.hpp"
#include "lwr/verify.hpp"

namespace lwr::cli {

enum ExitCode : int {
  kOk = 0,
  kViolations = 1,
  kUsage = 2,
  kRuntimeAbort = 3,
};

struct CommandOptions {
  std::filesystem::path out_dir;  ///< empty: use the config's output_dir
  unsigned jobs = 0;              ///< 0: hardware concurrency
  std::optional<LVariant> l_variant;
  std::optional<std::size_t> mu_grid;
  std::optional<std::filesystem::path> trace;
  bool run_inline = false;
};

int cmd_simulate(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_analyze(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_verify(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);
int cmd_sweep(const ExperimentConfig& cfg, const CommandOptions& opts, std::ostream& log);

/// Certificate for the configured datum with command-line overrides applied.
ThresholdReport analyze(const ExperimentConfig& cfg, const CommandOptions& opts);

struct VerificationRun {
  std::vector<BoundViolation> violations;
  std::vector<std::string> notes;
  std::size_t records = 0;
};

/// All checks the verify command performs. Throws ConfigError when no trace
/// source is given or the trace file is missing.
VerificationRun run_verification(const ExperimentConfig& cfg, const CommandOptions& opts);

struct SweepRow {
  double k_ahead = 0.0;
  double k_behind = 0.0;
  double look_ahead = 0.0;
  double look_behind = 0.0;
  double steepness = 0.0;
  double alpha = 0.0;
  /// Threshold of the unit-parameter datum with only alpha taken from this row.
  double g_alpha = 0.0;
  double g = 0.0;
  double mu_star = 0.0;
  double t_star = 0.0;
  double m0 = 0.0;
  std::string verdict;
  std::string outcome;
  double t_detect = 0.0;
  std::string error;
};

/// Cartesian product in K_a, K_b, gamma_a, gamma_b, steepness order (last
/// varies fastest). Rows come back in that order regardless of jobs.
std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, const CommandOptions& opts);

inline constexpr const char* kSweepHeader =
    "K_a,K_b,gamma_a,gamma_b,steepness,alpha,G_alpha,G,mu_star,t_star,M0,verdict,outcome,t_detect,"
    "error";

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// FNV-1a of the canonical config dump, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace lwr::cli
