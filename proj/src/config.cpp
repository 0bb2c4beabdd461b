#include "gmfg/config.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gmfg {
namespace {

using nlohmann::json;

// Best-effort line of a key path: each component is searched after the
// position of the previous one.
std::size_t line_of(std::string_view text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  for (const auto& key : path) {
    const auto found = text.find("\"" + key + "\"", pos);
    if (found == std::string_view::npos) break;
    pos = found;
  }
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

std::string dotted(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& k : path) out += (out.empty() ? "" : ".") + k;
  return out;
}

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
    throw ConfigError("config line " + std::to_string(line_of(text_, path)) + ": '" + dotted(path) + "' " + what);
  }

  void reject_unknown(const json& obj, const std::vector<std::string>& path, const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail(path.empty() ? std::vector<std::string>{"<root>"} : path, "must be an object");
    for (const auto& [key, value] : obj.items()) {
      if (!allowed.count(key)) {
        auto p = path;
        p.push_back(key);
        fail(p, "is not a recognized key");
      }
    }
  }

  template <typename T>
  T get(const json& obj, const std::vector<std::string>& path) const {
    const json& v = obj.at(path.back());
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!v.is_number()) fail(path, "must be a number");
      } else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>) {
        if (!v.is_number_integer()) fail(path, "must be an integer");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.get<long long>() < 0) fail(path, "must be non-negative");
        }
      }
      return v.get<T>();
    } catch (const json::exception&) {
      fail(path, "has the wrong type");
    }
  }

  template <typename T>
  std::vector<T> get_list(const json& obj, const std::vector<std::string>& path) const {
    const json& v = obj.at(path.back());
    if (!v.is_array()) fail(path, "must be an array");
    std::vector<T> out;
    for (const auto& e : v) {
      if constexpr (std::is_same_v<T, double>) {
        if (!e.is_number()) fail(path, "must contain numbers");
      } else {
        if (!e.is_number_integer() || e.get<long long>() < 0) fail(path, "must contain non-negative integers");
      }
      out.push_back(e.get<T>());
    }
    return out;
  }

 private:
  std::string_view text_;
};

std::string canonical_graphon(const std::string& kind) {
  if (kind == "uniform_attachment" || kind == "unif") return "uniform_attachment";
  if (kind == "ranked_attachment" || kind == "rank") return "ranked_attachment";
  if (kind == "erdos_renyi" || kind == "er") return "erdos_renyi";
  if (kind == "step") return "step";
  return {};
}

}  // namespace

double default_temperature(const std::string& model, const std::string& graphon_kind) {
  const std::string kind = canonical_graphon(graphon_kind);
  if (model == "sis") {
    if (kind == "uniform_attachment") return 0.101;
    if (kind == "ranked_attachment") return 0.3;
    if (kind == "erdos_renyi") return 0.101;
  } else if (model == "investment") {
    if (kind == "erdos_renyi") return 0.05;
  }
  return 0.0;
}

int default_iteration_budget(const std::string& model) { return model == "investment" ? 50 : 250; }

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  const Reader r(text);
  r.reject_unknown(root, {},
                   {"model", "graphon", "horizon", "M", "grid_scheme", "eta", "max_iters", "tol",
                    "record_exploitability", "seed", "sweep", "nagent", "smc"});

  ExperimentConfig cfg;
  cfg.hash = fnv1a_hex(text);

  if (!root.contains("model")) r.fail({"model"}, "is required");
  cfg.model = r.get<std::string>(root, {"model"});
  const auto names = model_names();
  if (std::find(names.begin(), names.end(), cfg.model) == names.end()) r.fail({"model"}, "names an unknown model");

  if (!root.contains("graphon")) r.fail({"graphon"}, "is required");
  const json& gj = root.at("graphon");
  r.reject_unknown(gj, {"graphon"}, {"kind", "p", "graph"});
  if (!gj.contains("kind")) r.fail({"graphon", "kind"}, "is required");
  cfg.graphon.kind = canonical_graphon(r.get<std::string>(gj, {"graphon", "kind"}));
  if (cfg.graphon.kind.empty()) r.fail({"graphon", "kind"}, "names an unknown graphon");
  if (gj.contains("p")) {
    cfg.graphon.p = r.get<double>(gj, {"graphon", "p"});
    if (!(cfg.graphon.p >= 0.0 && cfg.graphon.p <= 1.0)) r.fail({"graphon", "p"}, "must lie in [0, 1]");
  }
  if (gj.contains("graph")) cfg.graphon.graph_path = r.get<std::string>(gj, {"graphon", "graph"});
  if (cfg.graphon.kind == "step" && cfg.graphon.graph_path.empty())
    r.fail({"graphon", "graph"}, "is required for the step graphon");

  if (root.contains("horizon")) {
    cfg.horizon = r.get<int>(root, {"horizon"});
    if (cfg.horizon < 1) r.fail({"horizon"}, "must be at least 1");
  }
  if (root.contains("M")) {
    cfg.classes = r.get<std::size_t>(root, {"M"});
    if (cfg.classes < 1) r.fail({"M"}, "must be at least 1");
  }
  if (root.contains("grid_scheme")) {
    const auto scheme = r.get<std::string>(root, {"grid_scheme"});
    if (scheme == "midpoint")
      cfg.grid_scheme = GridScheme::midpoint;
    else if (scheme == "endpoint")
      cfg.grid_scheme = GridScheme::endpoint;
    else
      r.fail({"grid_scheme"}, "must be 'midpoint' or 'endpoint'");
    if (cfg.grid_scheme == GridScheme::endpoint && cfg.classes < 2)
      r.fail({"grid_scheme"}, "endpoint needs M >= 2");
  }
  cfg.eta = root.contains("eta") ? r.get<double>(root, {"eta"}) : default_temperature(cfg.model, cfg.graphon.kind);
  if (!(cfg.eta >= 0.0)) r.fail({"eta"}, "must be non-negative");
  cfg.max_iters = root.contains("max_iters") ? r.get<int>(root, {"max_iters"}) : default_iteration_budget(cfg.model);
  if (cfg.max_iters < 1) r.fail({"max_iters"}, "must be at least 1");
  if (root.contains("tol")) {
    cfg.tol = r.get<double>(root, {"tol"});
    if (!(cfg.tol > 0.0)) r.fail({"tol"}, "must be positive");
  }
  if (root.contains("record_exploitability"))
    cfg.record_exploitability = r.get<bool>(root, {"record_exploitability"});
  if (root.contains("seed")) cfg.seed = r.get<std::uint64_t>(root, {"seed"});

  if (root.contains("sweep")) {
    const json& sj = root.at("sweep");
    r.reject_unknown(sj, {"sweep"}, {"etas", "iters"});
    SweepConfig s;
    if (!sj.contains("etas")) r.fail({"sweep", "etas"}, "is required");
    s.etas = r.get_list<double>(sj, {"sweep", "etas"});
    if (s.etas.empty()) r.fail({"sweep", "etas"}, "must not be empty");
    for (double e : s.etas)
      if (!(e >= 0.0)) r.fail({"sweep", "etas"}, "must contain non-negative temperatures");
    if (sj.contains("iters")) s.iters = r.get<int>(sj, {"sweep", "iters"});
    if (s.iters < 10) r.fail({"sweep", "iters"}, "must be at least 10");
    cfg.sweep = s;
  }

  if (root.contains("nagent")) {
    const json& nj = root.at("nagent");
    r.reject_unknown(nj, {"nagent"}, {"policy", "Ns", "graphs_per_N", "episodes"});
    NagentConfig n;
    if (nj.contains("policy")) n.policy_path = r.get<std::string>(nj, {"nagent", "policy"});
    if (nj.contains("Ns")) n.ns = r.get_list<std::size_t>(nj, {"nagent", "Ns"});
    if (n.ns.empty()) r.fail({"nagent", "Ns"}, "must not be empty");
    for (auto v : n.ns)
      if (v < 1) r.fail({"nagent", "Ns"}, "must contain positive counts");
    if (nj.contains("graphs_per_N")) n.graphs_per_n = r.get<std::size_t>(nj, {"nagent", "graphs_per_N"});
    if (n.graphs_per_n < 1) r.fail({"nagent", "graphs_per_N"}, "must be at least 1");
    if (nj.contains("episodes")) n.episodes = r.get<std::size_t>(nj, {"nagent", "episodes"});
    if (n.episodes < 1) r.fail({"nagent", "episodes"}, "must be at least 1");
    cfg.nagent = n;
  }

  if (root.contains("smc")) {
    const json& mj = root.at("smc");
    r.reject_unknown(mj, {"smc"}, {"policy", "K", "L", "probes"});
    SmcConfig s;
    if (mj.contains("policy")) s.policy_path = r.get<std::string>(mj, {"smc", "policy"});
    if (mj.contains("K")) s.trajectories = r.get<std::size_t>(mj, {"smc", "K"});
    if (s.trajectories < 1) r.fail({"smc", "K"}, "must be at least 1");
    if (mj.contains("L")) s.particles = r.get<std::size_t>(mj, {"smc", "L"});
    if (s.particles < 1) r.fail({"smc", "L"}, "must be at least 1");
    if (mj.contains("probes")) s.probes = r.get<std::size_t>(mj, {"smc", "probes"});
    if (s.probes < 1) r.fail({"smc", "probes"}, "must be at least 1");
    cfg.smc = s;
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  auto cfg = parse_config(ss.str());

  // relative file references are taken from the config's directory
  const auto base = std::filesystem::path(path).parent_path();
  auto resolve = [&](std::string& p) {
    if (!p.empty() && std::filesystem::path(p).is_relative()) p = (base / p).string();
  };
  resolve(cfg.graphon.graph_path);
  if (cfg.nagent) resolve(cfg.nagent->policy_path);
  if (cfg.smc) resolve(cfg.smc->policy_path);
  return cfg;
}

Graphon build_graphon(const GraphonConfig& cfg) {
  if (cfg.kind != "step") return make_graphon(cfg.kind, cfg.p);
  std::ifstream in(cfg.graph_path);
  if (!in) throw ConfigError("cannot read graph file '" + cfg.graph_path + "'");
  try {
    return step_graphon_from_graph(sampled_graph_from_json(nlohmann::json::parse(in)));
  } catch (const std::exception& e) {
    throw ConfigError("graph file '" + cfg.graph_path + "': " + e.what());
  }
}

}  // namespace gmfg
