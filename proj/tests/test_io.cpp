#include <doctest.h>

#include <sstream>

#include "gmfg/io.hpp"
#include "oracles.hpp"

using namespace gmfg;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, static_cast<int>(rng.uniform() * 40) - 20);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.25) == "0.25");
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV layouts") {
  const auto sis = sis_graphon_model(2);
  const auto grid = uniform_grid(2);
  const auto pol = PolicyEnsemble::constant(grid, *sis, sis::kDistancing);
  std::ostringstream os;
  io::write_policy_csv(os, pol, {{"seed", "3"}, {"model", "sis"}});
  const auto lines = lines_of(os.str());
  REQUIRE(lines.size() == 2 + 1 + 2 * 2 * 2 * 2);
  CHECK(lines[0] == "# seed: 3");
  CHECK(lines[1] == "# model: sis");
  CHECK(lines[2] == "class,alpha,t,x,u,value");
  CHECK(lines[3] == "0,0.25,0,0,0,0");
  CHECK(lines[4] == "0,0.25,0,0,1,1");
  CHECK(lines.back() == "1,0.75,1,1,1,1");

  std::ostringstream mf_os;
  io::write_mean_field_csv(mf_os, forward_simulate(*sis, Graphon::erdos_renyi(0.0), pol));
  const auto mf_lines = lines_of(mf_os.str());
  CHECK(mf_lines[0] == "class,alpha,t,x,value");
  CHECK(mf_lines[1] == "0,0.25,0,0,0.5");
  CHECK(mf_lines.size() == 1 + 2 * 2 * 2);

  std::ostringstream dev_os;
  DeviationTable table;
  table.rows.push_back({10, 42, 0.5, 0.25, 0.125});
  io::write_deviation_csv(dev_os, table);
  CHECK(dev_os.str() == "n,graph_seed,max_dev,mean_dev,stderr\n10,42,0.5,0.25,0.125\n");

  std::ostringstream sweep_os;
  const std::vector<SweepRow> rows{{0.1, 1.5, 1.0, 2.0}};
  io::write_sweep_csv(sweep_os, rows);
  CHECK(sweep_os.str() == "eta,mean_expl,min_expl,max_expl\n0.10000000000000001,1.5,1,2\n");

  SmcTable smc{{0.0, 1.0}, 1, 2, {0.1, 0.2, 0.3, 0.4}};
  std::ostringstream smc_os;
  io::write_smc_csv(smc_os, smc);
  CHECK(lines_of(smc_os.str()) == std::vector<std::string>{"alpha,t,x,mass", "0,0,0,0.10000000000000001",
                                                           "0,0,1,0.20000000000000001", "1,0,0,0.29999999999999999",
                                                           "1,0,1,0.40000000000000002"});
}

TEST_CASE("policy CSV round trip on random policies") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const testing::RandomToyModel toy(1 + trial % 4, 1 + trial % 3, 1 + trial % 6, static_cast<std::uint64_t>(trial));
    const auto scheme = trial % 2 ? GridScheme::endpoint : GridScheme::midpoint;
    const auto grid = ClassGrid::uniform(2 + trial % 5, scheme);
    const auto pol = testing::random_policy(grid, toy, rng);
    std::stringstream ss;
    io::write_policy_csv(ss, pol, {{"k", "v"}});
    CHECK(io::read_policy_csv(ss, scheme) == pol);
  }
}

TEST_CASE("policy CSV errors") {
  auto read = [](const std::string& text) {
    std::istringstream is(text);
    return io::read_policy_csv(is);
  };
  CHECK_THROWS_AS(read(""), std::runtime_error);
  CHECK_THROWS_WITH_AS(read("class,alpha,t,x,value\n"), doctest::Contains("line 1"), std::runtime_error);
  const std::string header = "# c\nclass,alpha,t,x,u,value\n";
  CHECK_THROWS_WITH_AS(read(header + "0,0.5,0,0,0,1\n0,0.5,0,0,0,1\n"), doctest::Contains("line 4: duplicate"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(read(header + "0,0.5,0,0,0,0.5\n0,0.5,0,0,1,0.5\n0,0.5,0,1,0,1\n"), doctest::Contains("missing"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(read(header + "0,0.5,0,0,0,abc\n"), doctest::Contains("line 3"), std::runtime_error);
  CHECK_THROWS_WITH_AS(read(header + "0,0.5,0,0,0,0.3\n0,0.5,0,0,1,0.3\n"), doctest::Contains("policy csv"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(read(header + "0,0.5,0,0,0,1\n0,0.6,0,1,0,1\n"), doctest::Contains("alpha changes"),
                       std::runtime_error);
  CHECK_THROWS_AS(read(header + "0,0.5,0,0,0,1,7\n"), std::runtime_error);
  const auto ok = read(header + "0,0.5,0,0,0,0.25\r\n0,0.5,0,0,1,0.75\r\n");
  CHECK(ok(0, 0, 0, 1) == 0.75);
}

TEST_CASE("solve report JSON") {
  const auto sis = sis_graphon_model(5);
  SolveOptions opt;
  opt.classes = 2;
  opt.eta = 0.3;
  opt.max_iters = 3;
  opt.record_exploitability = true;
  const auto report = fixed_point_solve(*sis, Graphon::ranked_attachment(), opt);
  const auto j = io::report_to_json(report);
  CHECK(j.at("iterations") == report.iterations);
  CHECK(j.at("converged") == report.converged);
  CHECK(j.at("residual_history").size() == static_cast<std::size_t>(report.iterations));
  CHECK(j.at("exploitability_history").size() == 3);
  CHECK(j.at("final_residual") == report.residual_history.back());
  CHECK(j.at("classes") == 2);
  CHECK(j.at("horizon") == 5);

  opt.record_exploitability = false;
  CHECK_FALSE(io::report_to_json(fixed_point_solve(*sis, Graphon::ranked_attachment(), opt)).contains("exploitability_history"));
}
