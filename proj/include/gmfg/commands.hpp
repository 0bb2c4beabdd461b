#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "gmfg/config.hpp"

namespace gmfg {

/// Failure to write outputs. Maps to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct CommandContext {
  std::filesystem::path out_dir = ".";
  unsigned workers = 1;
  std::optional<std::uint64_t> seed_override;
};

/// report.json, policy.csv, meanfield.csv
void cmd_solve(const ExperimentConfig& cfg, const CommandContext& ctx);
/// sweep.csv
void cmd_sweep(const ExperimentConfig& cfg, const CommandContext& ctx);
/// deviation.csv
void cmd_verify_nagent(const ExperimentConfig& cfg, const CommandContext& ctx);
/// smc_compare.csv (alpha, t, l1) and smc_estimate.csv (alpha, t, x, mass)
void cmd_smc_compare(const ExperimentConfig& cfg, const CommandContext& ctx);

/// Dispatches a subcommand by name ("solve", "sweep", "verify-nagent",
/// "smc-compare") and maps failures onto exit codes, printing the message
/// to stderr.
int run_command(const std::string& command, const std::string& config_path, const CommandContext& ctx);

}  // namespace gmfg
