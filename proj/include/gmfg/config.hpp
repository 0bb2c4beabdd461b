#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gmfg/graphon.hpp"
#include "gmfg/meanfield.hpp"
#include "gmfg/model.hpp"

namespace gmfg {

/// Invalid or malformed configuration. Maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphonConfig {
  std::string kind = "erdos_renyi";  // canonical long name, or "step"
  double p = 0.5;
  std::string graph_path;  // SampledGraph JSON for kind "step"
};

struct SweepConfig {
  std::vector<double> etas;
  int iters = 50;
};

struct NagentConfig {
  std::string policy_path;
  std::vector<std::size_t> ns{10, 20, 50, 100};
  std::size_t graphs_per_n = 3;
  std::size_t episodes = 2000;
};

struct SmcConfig {
  std::string policy_path;  // empty: solve first
  std::size_t trajectories = 5;
  std::size_t particles = 200;
  std::size_t probes = 11;
};

struct ExperimentConfig {
  std::string model = "sis";
  GraphonConfig graphon;
  int horizon = 50;
  std::size_t classes = 50;
  GridScheme grid_scheme = GridScheme::midpoint;
  double eta = 0.0;
  int max_iters = 250;
  double tol = 1e-8;
  bool record_exploitability = false;
  std::uint64_t seed = 0;
  std::optional<SweepConfig> sweep;
  std::optional<NagentConfig> nagent;
  std::optional<SmcConfig> smc;

  /// FNV-1a 64 of the raw config text, hex.
  std::string hash;
};

/// Temperatures used for the benchmark problems: SIS 0.101 / 0.3 / 0.101 and
/// Investment 0 / 0 / 0.05 for unif / rank / er. Other graphons default to 0.
double default_temperature(const std::string& model, const std::string& graphon_kind);

/// Fixed point iteration budget: 250 for SIS, 50 for Investment.
int default_iteration_budget(const std::string& model);

/// Parses and validates a JSON config. Throws ConfigError whose message
/// names the offending line.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

std::string fnv1a_hex(std::string_view text);

/// Builds the configured graphon; throws ConfigError for unreadable graphs.
Graphon build_graphon(const GraphonConfig& cfg);

}  // namespace gmfg
