#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "gmfg/commands.hpp"
#include "gmfg/io.hpp"

using namespace gmfg;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir(const std::string& name) {
  const fs::path dir = fs::path(GMFG_TEST_TMPDIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text, const std::string& name = "config.json") {
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> data_lines(const fs::path& path) {
  std::vector<std::string> out;
  std::istringstream is(slurp(path));
  for (std::string line; std::getline(is, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

int run(const std::string& command, const fs::path& config, const fs::path& out, unsigned workers = 1) {
  CommandContext ctx;
  ctx.out_dir = out;
  ctx.workers = workers;
  return run_command(command, config.string(), ctx);
}

}  // namespace

TEST_CASE("config defaults follow the benchmark table") {
  CHECK(default_temperature("sis", "uniform_attachment") == 0.101);
  CHECK(default_temperature("sis", "ranked_attachment") == 0.3);
  CHECK(default_temperature("sis", "erdos_renyi") == 0.101);
  CHECK(default_temperature("investment", "uniform_attachment") == 0.0);
  CHECK(default_temperature("investment", "ranked_attachment") == 0.0);
  CHECK(default_temperature("investment", "erdos_renyi") == 0.05);
  CHECK(default_iteration_budget("sis") == 250);
  CHECK(default_iteration_budget("investment") == 50);

  const auto cfg = parse_config(R"({"model": "investment", "graphon": {"kind": "er", "p": 0.5}})");
  CHECK(cfg.graphon.kind == "erdos_renyi");
  CHECK(cfg.eta == 0.05);
  CHECK(cfg.max_iters == 50);
  CHECK(cfg.classes == 50);
  CHECK(cfg.horizon == 50);
  CHECK(cfg.tol == 1e-8);
  CHECK_FALSE(cfg.sweep.has_value());
  CHECK(cfg.hash == fnv1a_hex(R"({"model": "investment", "graphon": {"kind": "er", "p": 0.5}})"));

  const auto full = parse_config(R"({
    "model": "sis", "graphon": {"kind": "rank"}, "M": 7, "grid_scheme": "endpoint",
    "eta": 0.2, "max_iters": 9, "tol": 1e-6, "seed": 12,
    "sweep": {"etas": [0.3, 0.1], "iters": 20},
    "nagent": {"policy": "p.csv", "Ns": [5, 6], "graphs_per_N": 2, "episodes": 3},
    "smc": {"K": 2, "L": 30, "probes": 4}
  })");
  CHECK(full.graphon.kind == "ranked_attachment");
  CHECK(full.grid_scheme == GridScheme::endpoint);
  CHECK(full.sweep->etas == std::vector<double>{0.3, 0.1});
  CHECK(full.nagent->ns == std::vector<std::size_t>{5, 6});
  CHECK(full.smc->particles == 30);
  CHECK(full.seed == 12);
}

TEST_CASE("config validation names the offending line") {
  CHECK_THROWS_WITH_AS(parse_config("{\n  \"model\": \"sis\", \"graphon\": {\"kind\": \"unif\"},\n  \"eta\": -1\n}"), doctest::Contains("line 3"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("{\n\"model\": \"sis\",\n\"graphon\": {\"kind\": \"er\", \"p\": 2}\n}"),
                       doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("{\"model\": \"sis\",\n \"bogus\": 1}"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("{\n\"model\": \"sis\", \"graphon\": {\"kind\": \"unif\"},\n\"M\": 0}"), doctest::Contains("line 3"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": \"sis\", }"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": \"chess\"}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": \"sis\", \"graphon\": {\"kind\": \"unif\"}, \"tol\": 0}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": \"sis\", \"graphon\": {\"kind\": \"unif\"}, \"sweep\": {\"etas\": []}}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": \"sis\", \"graphon\": {\"kind\": \"unif\"}, \"sweep\": {\"etas\": [0.1], \"iters\": 5}}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": \"sis\", \"graphon\": {\"kind\": \"unif\"}, \"M\": 1, \"grid_scheme\": \"endpoint\"}"), ConfigError);
  CHECK_THROWS_AS(parse_config("{\"model\": \"sis\", \"graphon\": {\"kind\": \"unif\"}, \"smc\": {\"K\": 0}}"), ConfigError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("exit codes") {
  const auto dir = tmp_dir("exit_codes");
  CHECK(run("solve", write_config(dir, "{\"model\": \"sis\",}", "bad.json"), dir / "out") == kExitConfig);
  CHECK(run("solve", dir / "missing.json", dir / "out") == kExitConfig);
  const auto sweep = write_config(dir, R"({"model": "sis", "graphon": {"kind": "unif"}, "M": 2, "sweep": {"etas": []}})", "sweep.json");
  CHECK(run("sweep", sweep, dir / "out") == kExitConfig);
  const auto ok = write_config(dir, R"({"model": "sis", "graphon": {"kind": "unif"}, "horizon": 5, "M": 2, "max_iters": 2})", "ok.json");
  CHECK(run("launch", ok, dir / "out") == kExitConfig);
  std::ofstream(dir / "blocker") << "x";
  CHECK(run("solve", ok, dir / "blocker" / "out") == kExitIo);
  CHECK(run("solve", ok, dir / "out") == kExitOk);
}

TEST_CASE("solve writes report, policy and mean field") {
  const auto dir = tmp_dir("solve");
  const auto cfg = write_config(dir, R"({
    "model": "sis", "graphon": {"kind": "erdos_renyi", "p": 0.5},
    "M": 3, "eta": 0.101, "max_iters": 1000, "seed": 4
  })");
  REQUIRE(run("solve", cfg, dir / "a") == kExitOk);
  const auto report = nlohmann::json::parse(slurp(dir / "a" / "report.json"));
  CHECK(report.at("converged") == true);
  CHECK(report.at("meta").at("model") == "sis");
  CHECK(report.at("meta").at("config_hash") == fnv1a_hex(slurp(cfg)));
  CHECK(report.at("eta") == 0.101);

  const auto policy = slurp(dir / "a" / "policy.csv");
  CHECK(policy.rfind("# gmfg_version: ", 0) == 0);
  CHECK(policy.find("# seed: 4\n") != std::string::npos);
  CHECK(data_lines(dir / "a" / "policy.csv").size() == 1 + 3 * 50 * 2 * 2);
  CHECK(data_lines(dir / "a" / "meanfield.csv").size() == 1 + 3 * 50 * 2);

  std::ifstream in(dir / "a" / "policy.csv");
  const auto pol = io::read_policy_csv(in);
  CHECK(pol.classes() == 3);
  CHECK(pol.horizon() == 50);

  REQUIRE(run("solve", cfg, dir / "b", 3) == kExitOk);
  for (const char* f : {"report.json", "policy.csv", "meanfield.csv"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}

TEST_CASE("solve on Investment with uniform attachment converges unregularized") {
  const auto dir = tmp_dir("solve_investment");
  const auto cfg = write_config(dir, R"({"model": "investment", "graphon": {"kind": "unif"}, "M": 20})");
  REQUIRE(run("solve", cfg, dir / "out") == kExitOk);
  const auto report = nlohmann::json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report.at("eta") == 0.0);
  CHECK(report.at("converged") == true);
  CHECK(report.at("iterations").get<int>() <= 50);
}

TEST_CASE("sweep writes one row per temperature") {
  const auto dir = tmp_dir("sweep");
  const auto cfg = write_config(dir, R"({
    "model": "sis", "graphon": {"kind": "unif"}, "horizon": 10, "M": 3,
    "sweep": {"etas": [0.5, 0.2], "iters": 10}
  })");
  REQUIRE(run("sweep", cfg, dir / "out") == kExitOk);
  const auto lines = data_lines(dir / "out" / "sweep.csv");
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "eta,mean_expl,min_expl,max_expl");
  CHECK(lines[1].rfind("0.5,", 0) == 0);
  CHECK(lines[2].rfind("0.20000000000000001,", 0) == 0);
  CHECK(slurp(dir / "out" / "sweep.csv").find("# uniform_policy_exploitability: ") != std::string::npos);
}

TEST_CASE("verify-nagent reads a solved policy") {
  const auto dir = tmp_dir("nagent");
  write_config(dir, R"({"model": "sis", "graphon": {"kind": "unif"}, "horizon": 8, "M": 4, "max_iters": 5})",
               "solve.json");
  REQUIRE(run("solve", dir / "solve.json", dir / "solved") == kExitOk);

  const auto cfg = write_config(dir, R"({
    "model": "sis", "graphon": {"kind": "unif"}, "horizon": 8, "M": 4, "seed": 3,
    "nagent": {"policy": "solved/policy.csv", "Ns": [10, 20, 50, 100], "graphs_per_N": 3, "episodes": 20}
  })");
  REQUIRE(run("verify-nagent", cfg, dir / "a") == kExitOk);
  const auto lines = data_lines(dir / "a" / "deviation.csv");
  CHECK(lines.size() == 1 + 12);
  CHECK(lines[0] == "n,graph_seed,max_dev,mean_dev,stderr");
  CHECK(lines[1].rfind("10,", 0) == 0);
  CHECK(lines[12].rfind("100,", 0) == 0);
  REQUIRE(run("verify-nagent", cfg, dir / "b", 4) == kExitOk);
  CHECK(slurp(dir / "a" / "deviation.csv") == slurp(dir / "b" / "deviation.csv"));

  const auto mismatch = write_config(dir, R"({
    "model": "sis", "graphon": {"kind": "unif"}, "horizon": 8, "M": 5,
    "nagent": {"policy": "solved/policy.csv", "Ns": [10]}
  })", "mismatch.json");
  CHECK(run("verify-nagent", mismatch, dir / "c") == kExitConfig);
  const auto scheme = write_config(dir, R"({
    "model": "sis", "graphon": {"kind": "unif"}, "horizon": 8, "M": 4, "grid_scheme": "endpoint",
    "nagent": {"policy": "solved/policy.csv", "Ns": [10]}
  })", "scheme.json");
  CHECK(run("verify-nagent", scheme, dir / "c") == kExitConfig);
  const auto missing = write_config(dir, R"({
    "model": "sis", "graphon": {"kind": "unif"}, "horizon": 8, "M": 4,
    "nagent": {"policy": "nope.csv", "Ns": [10]}
  })", "missing.json");
  CHECK(run("verify-nagent", missing, dir / "c") == kExitConfig);
}

TEST_CASE("smc-compare emits finite distances") {
  const auto dir = tmp_dir("smc");
  const auto cfg = write_config(dir, R"({
    "model": "investment", "graphon": {"kind": "rank"}, "horizon": 6, "M": 3, "max_iters": 3,
    "smc": {"K": 1, "L": 1, "probes": 3}
  })");
  REQUIRE(run("smc-compare", cfg, dir / "out") == kExitOk);
  const auto lines = data_lines(dir / "out" / "smc_compare.csv");
  REQUIRE(lines.size() == 1 + 3 * 6);
  CHECK(lines[0] == "alpha,t,l1");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const double l1 = std::stod(lines[i].substr(lines[i].rfind(',') + 1));
    CHECK(std::isfinite(l1));
    CHECK(l1 >= 0.0);
  }
  CHECK(data_lines(dir / "out" / "smc_estimate.csv").size() == 1 + 3 * 6 * 10);

  const auto bad = write_config(dir, R"({"model": "sis", "graphon": {"kind": "unif"}, "smc": {"K": 0, "L": 5}})", "bad.json");
  CHECK(run("smc-compare", bad, dir / "bad") == kExitConfig);
}

TEST_CASE("step graphon configs load a sampled graph file") {
  const auto dir = tmp_dir("step");
  const auto graph = sample_w_random_graph(Graphon::erdos_renyi(0.4), 6, 2);
  std::ofstream(dir / "graph.json") << to_json(graph).dump();
  const auto cfg = load_config(write_config(dir, R"({"model": "sis", "graphon": {"kind": "step", "graph": "graph.json"}})").string());
  const auto g = build_graphon(cfg.graphon);
  CHECK(g.kind() == GraphonKind::step);
  CHECK(g.name() == "step");
  const auto broken = load_config(
      write_config(dir, R"({"model": "sis", "graphon": {"kind": "step", "graph": "nope.json"}})", "b.json").string());
  CHECK_THROWS_AS(build_graphon(broken.graphon), ConfigError);
}
