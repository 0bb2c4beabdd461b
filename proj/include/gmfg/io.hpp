#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gmfg/meanfield.hpp"
#include "gmfg/nagent.hpp"
#include "gmfg/smc.hpp"
#include "gmfg/solver.hpp"

namespace gmfg::io {

inline constexpr const char* kVersion = "0.1.0";

/// Ordered key/value pairs written as "# key: value" comment lines.
using Metadata = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits, round-trips every double.
std::string format_double(double v);

void write_metadata(std::ostream& os, const Metadata& meta);

/// class,alpha,t,x,value
void write_mean_field_csv(std::ostream& os, const MeanFieldEnsemble& mf, const Metadata& meta = {});
/// class,alpha,t,x,u,value
void write_policy_csv(std::ostream& os, const PolicyEnsemble& pol, const Metadata& meta = {});
/// alpha,t,x,mass
void write_smc_csv(std::ostream& os, const SmcTable& table, const Metadata& meta = {});
/// n,graph_seed,max_dev,mean_dev,stderr
void write_deviation_csv(std::ostream& os, const DeviationTable& table, const Metadata& meta = {});
/// eta,mean_expl,min_expl,max_expl
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, const Metadata& meta = {});

/// Reads a policy written by write_policy_csv. '#' lines are skipped. Every
/// (class, t, x, u) cell must appear exactly once and rows must be
/// distributions. Throws std::runtime_error on malformed input.
PolicyEnsemble read_policy_csv(std::istream& is, GridScheme scheme = GridScheme::midpoint);

/// Scalars and histories of a solve; policy and mean field go to CSV.
nlohmann::json report_to_json(const SolveReport& report);

}  // namespace gmfg::io
