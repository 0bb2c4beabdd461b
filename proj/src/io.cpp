#include "gmfg/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace gmfg::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [key, value] : meta) os << "# " << key << ": " << value << '\n';
}

void write_mean_field_csv(std::ostream& os, const MeanFieldEnsemble& mf, const Metadata& meta) {
  write_metadata(os, meta);
  os << "class,alpha,t,x,value\n";
  for (std::size_t m = 0; m < mf.classes(); ++m) {
    const std::string alpha = format_double(mf.grid().representative(m));
    for (int t = 0; t < mf.horizon(); ++t)
      for (int x = 0; x < mf.num_states(); ++x)
        os << m << ',' << alpha << ',' << t << ',' << x << ',' << format_double(mf(m, t, x)) << '\n';
  }
}

void write_policy_csv(std::ostream& os, const PolicyEnsemble& pol, const Metadata& meta) {
  write_metadata(os, meta);
  os << "class,alpha,t,x,u,value\n";
  for (std::size_t m = 0; m < pol.classes(); ++m) {
    const std::string alpha = format_double(pol.grid().representative(m));
    for (int t = 0; t < pol.horizon(); ++t)
      for (int x = 0; x < pol.num_states(); ++x)
        for (int u = 0; u < pol.num_actions(); ++u)
          os << m << ',' << alpha << ',' << t << ',' << x << ',' << u << ',' << format_double(pol(m, t, x, u))
             << '\n';
  }
}

void write_smc_csv(std::ostream& os, const SmcTable& table, const Metadata& meta) {
  write_metadata(os, meta);
  os << "alpha,t,x,mass\n";
  for (std::size_t p = 0; p < table.probes.size(); ++p) {
    const std::string alpha = format_double(table.probes[p]);
    for (int t = 0; t < table.horizon; ++t)
      for (int x = 0; x < table.num_states; ++x)
        os << alpha << ',' << t << ',' << x << ',' << format_double(table(p, t, x)) << '\n';
  }
}

void write_deviation_csv(std::ostream& os, const DeviationTable& table, const Metadata& meta) {
  write_metadata(os, meta);
  os << "n,graph_seed,max_dev,mean_dev,stderr\n";
  for (const auto& r : table.rows)
    os << r.n << ',' << r.graph_seed << ',' << format_double(r.max_deviation) << ','
       << format_double(r.mean_deviation) << ',' << format_double(r.standard_error) << '\n';
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows, const Metadata& meta) {
  write_metadata(os, meta);
  os << "eta,mean_expl,min_expl,max_expl\n";
  for (const auto& r : rows)
    os << format_double(r.eta) << ',' << format_double(r.mean_exploitability) << ','
       << format_double(r.min_exploitability) << ',' << format_double(r.max_exploitability) << '\n';
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

long parse_index(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  long v = -1;
  try {
    v = std::stol(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || v < 0)
    throw std::runtime_error("policy csv line " + std::to_string(line_no) + ": bad index '" + s + "'");
  return v;
}

double parse_real(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || !std::isfinite(v))
    throw std::runtime_error("policy csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

PolicyEnsemble read_policy_csv(std::istream& is, GridScheme scheme) {
  using Key = std::tuple<long, long, long, long>;
  std::map<Key, double> cells;
  std::map<long, double> alphas;
  long max_m = -1, max_t = -1, max_x = -1, max_u = -1;
  bool header_seen = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "class,alpha,t,x,u,value")
        throw std::runtime_error("policy csv line " + std::to_string(line_no) + ": unexpected header '" + line + "'");
      header_seen = true;
      continue;
    }
    const auto f = split_fields(line);
    if (f.size() != 6)
      throw std::runtime_error("policy csv line " + std::to_string(line_no) + ": expected 6 fields");
    const long m = parse_index(f[0], line_no);
    const double alpha = parse_real(f[1], line_no);
    const long t = parse_index(f[2], line_no);
    const long x = parse_index(f[3], line_no);
    const long u = parse_index(f[4], line_no);
    const double value = parse_real(f[5], line_no);
    if (auto [it, inserted] = alphas.emplace(m, alpha); !inserted && it->second != alpha)
      throw std::runtime_error("policy csv line " + std::to_string(line_no) + ": class alpha changes");
    if (!cells.emplace(Key{m, t, x, u}, value).second)
      throw std::runtime_error("policy csv line " + std::to_string(line_no) + ": duplicate cell");
    max_m = std::max(max_m, m);
    max_t = std::max(max_t, t);
    max_x = std::max(max_x, x);
    max_u = std::max(max_u, u);
  }
  if (!header_seen || cells.empty()) throw std::runtime_error("policy csv: no data");
  const auto expected = static_cast<std::size_t>((max_m + 1) * (max_t + 1) * (max_x + 1) * (max_u + 1));
  if (cells.size() != expected || alphas.size() != static_cast<std::size_t>(max_m + 1))
    throw std::runtime_error("policy csv: missing (class, t, x, u) cells");

  std::vector<double> reps;
  reps.reserve(alphas.size());
  for (const auto& [m, a] : alphas) reps.push_back(a);
  PolicyEnsemble pol(ClassGrid::from_representatives(std::move(reps), scheme), static_cast<int>(max_t + 1),
                     static_cast<int>(max_x + 1), static_cast<int>(max_u + 1));
  for (const auto& [key, value] : cells) {
    const auto [m, t, x, u] = key;
    pol(static_cast<std::size_t>(m), static_cast<int>(t), static_cast<int>(x), static_cast<int>(u)) = value;
  }
  try {
    pol.validate(1e-9);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("policy csv: ") + e.what());
  }
  return pol;
}

nlohmann::json report_to_json(const SolveReport& report) {
  nlohmann::json j;
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["final_residual"] = report.residual_history.empty() ? 0.0 : report.residual_history.back();
  j["final_exploitability"] = report.final_exploitability;
  j["residual_history"] = report.residual_history;
  if (!report.exploitability_history.empty()) j["exploitability_history"] = report.exploitability_history;
  j["classes"] = report.final_policy.classes();
  j["horizon"] = report.final_policy.horizon();
  return j;
}

}  // namespace gmfg::io
