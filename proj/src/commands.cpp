#include "gmfg/commands.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gmfg/io.hpp"
#include "gmfg/nagent.hpp"
#include "gmfg/smc.hpp"
#include "gmfg/solver.hpp"

namespace gmfg {
namespace {

std::uint64_t effective_seed(const ExperimentConfig& cfg, const CommandContext& ctx) {
  return ctx.seed_override.value_or(cfg.seed);
}

io::Metadata base_metadata(const std::string& command, const ExperimentConfig& cfg, const CommandContext& ctx) {
  return {{"gmfg_version", io::kVersion},
          {"command", command},
          {"config_hash", cfg.hash},
          {"seed", std::to_string(effective_seed(cfg, ctx))},
          {"model", cfg.model},
          {"graphon", cfg.graphon.kind == "erdos_renyi" ? "erdos_renyi(" + io::format_double(cfg.graphon.p) + ")"
                                                        : cfg.graphon.kind},
          {"M", std::to_string(cfg.classes)},
          {"grid_scheme", cfg.grid_scheme == GridScheme::midpoint ? "midpoint" : "endpoint"}};
}

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void prepare_out_dir(const CommandContext& ctx) {
  std::error_code ec;
  std::filesystem::create_directories(ctx.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + ctx.out_dir.string() + "': " + ec.message());
}

SolveOptions solve_options(const ExperimentConfig& cfg, const CommandContext& ctx) {
  SolveOptions opts;
  opts.classes = cfg.classes;
  opts.grid_scheme = cfg.grid_scheme;
  opts.eta = cfg.eta;
  opts.max_iters = cfg.max_iters;
  opts.tol = cfg.tol;
  opts.record_exploitability = cfg.record_exploitability;
  opts.workers = ctx.workers;
  return opts;
}

PolicyEnsemble load_policy(const std::string& path, const ExperimentConfig& cfg, const GameModel& model) {
  if (path.empty()) throw ConfigError("a policy file is required (set 'policy' in the command block)");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read policy file '" + path + "'");
  PolicyEnsemble pol;
  try {
    pol = io::read_policy_csv(in, cfg.grid_scheme);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (pol.classes() != cfg.classes)
    throw ConfigError("policy file has " + std::to_string(pol.classes()) + " classes but the config sets M = " +
                      std::to_string(cfg.classes));
  if (!(pol.grid() == ClassGrid::uniform(cfg.classes, cfg.grid_scheme)))
    throw ConfigError("policy file class representatives do not match the configured grid");
  if (pol.horizon() != model.horizon() || pol.num_states() != model.num_states() ||
      pol.num_actions() != model.num_actions())
    throw ConfigError("policy file shape does not match model '" + cfg.model + "'");
  return pol;
}

}  // namespace

void cmd_solve(const ExperimentConfig& cfg, const CommandContext& ctx) {
  const auto model = make_model(cfg.model, cfg.horizon);
  const auto g = build_graphon(cfg.graphon);
  prepare_out_dir(ctx);
  const auto report = fixed_point_solve(*model, g, solve_options(cfg, ctx));
  const auto meta = base_metadata("solve", cfg, ctx);

  auto j = io::report_to_json(report);
  for (const auto& [k, v] : meta) j["meta"][k] = v;
  j["eta"] = cfg.eta;
  j["max_iters"] = cfg.max_iters;
  j["tol"] = cfg.tol;
  write_file(ctx.out_dir / "report.json", j.dump(2) + "\n");

  std::ostringstream pol, mf;
  io::write_policy_csv(pol, report.final_policy, meta);
  io::write_mean_field_csv(mf, report.final_mean_field, meta);
  write_file(ctx.out_dir / "policy.csv", pol.str());
  write_file(ctx.out_dir / "meanfield.csv", mf.str());
}

void cmd_sweep(const ExperimentConfig& cfg, const CommandContext& ctx) {
  if (!cfg.sweep) throw ConfigError("the sweep command needs a 'sweep' block");
  const auto model = make_model(cfg.model, cfg.horizon);
  const auto g = build_graphon(cfg.graphon);
  prepare_out_dir(ctx);
  const auto rows =
      temperature_sweep(*model, g, cfg.classes, cfg.sweep->etas, cfg.sweep->iters, cfg.grid_scheme, ctx.workers);
  auto meta = base_metadata("sweep", cfg, ctx);
  meta.emplace_back("iters", std::to_string(cfg.sweep->iters));
  meta.emplace_back("uniform_policy_exploitability",
                    io::format_double(uniform_policy_exploitability(
                        *model, g, ClassGrid::uniform(cfg.classes, cfg.grid_scheme), ctx.workers)));
  std::ostringstream os;
  io::write_sweep_csv(os, rows, meta);
  write_file(ctx.out_dir / "sweep.csv", os.str());
}

void cmd_verify_nagent(const ExperimentConfig& cfg, const CommandContext& ctx) {
  if (!cfg.nagent) throw ConfigError("the verify-nagent command needs an 'nagent' block");
  const auto model = make_model(cfg.model, cfg.horizon);
  const auto g = build_graphon(cfg.graphon);
  const auto pol = load_policy(cfg.nagent->policy_path, cfg, *model);
  prepare_out_dir(ctx);
  const auto mf = forward_simulate(*model, g, pol, ctx.workers);
  const auto table = deviation_experiment(*model, g, pol, mf, cfg.nagent->ns, cfg.nagent->graphs_per_n,
                                          cfg.nagent->episodes, effective_seed(cfg, ctx), ctx.workers);
  auto meta = base_metadata("verify-nagent", cfg, ctx);
  meta.emplace_back("graphs_per_N", std::to_string(table.graphs_per_n));
  meta.emplace_back("episodes_per_graph", std::to_string(table.episodes));
  std::ostringstream os;
  io::write_deviation_csv(os, table, meta);
  write_file(ctx.out_dir / "deviation.csv", os.str());
}

void cmd_smc_compare(const ExperimentConfig& cfg, const CommandContext& ctx) {
  const SmcConfig smc = cfg.smc.value_or(SmcConfig{});
  if (smc.trajectories < 1 || smc.particles < 1) throw ConfigError("smc: K and L must be at least 1");
  const auto model = make_model(cfg.model, cfg.horizon);
  const auto g = build_graphon(cfg.graphon);
  PolicyEnsemble pol = smc.policy_path.empty() ? fixed_point_solve(*model, g, solve_options(cfg, ctx)).final_policy
                                               : load_policy(smc.policy_path, cfg, *model);
  prepare_out_dir(ctx);

  const auto mf = forward_simulate(*model, g, pol, ctx.workers);
  const auto probes = probe_grid(smc.probes);
  const auto table =
      smc_estimate(*model, g, pol, smc.trajectories, smc.particles, effective_seed(cfg, ctx), ctx.workers)
          .tabulate(probes);

  auto meta = base_metadata("smc-compare", cfg, ctx);
  meta.emplace_back("K", std::to_string(smc.trajectories));
  meta.emplace_back("L", std::to_string(smc.particles));

  std::ostringstream cmp;
  io::write_metadata(cmp, meta);
  cmp << "alpha,t,l1\n";
  for (std::size_t p = 0; p < probes.size(); ++p) {
    for (int t = 0; t < model->horizon(); ++t) {
      const auto exact = neighborhood_mf(g, mf, probes[p], t);
      const auto est = table.row(p, t);
      double l1 = 0.0;
      for (std::size_t x = 0; x < exact.size(); ++x) l1 += std::abs(exact[x] - est[x]);
      cmp << io::format_double(probes[p]) << ',' << t << ',' << io::format_double(l1) << '\n';
    }
  }
  std::ostringstream est;
  io::write_smc_csv(est, table, meta);
  write_file(ctx.out_dir / "smc_compare.csv", cmp.str());
  write_file(ctx.out_dir / "smc_estimate.csv", est.str());
}

int run_command(const std::string& command, const std::string& config_path, const CommandContext& ctx) {
  try {
    const auto cfg = load_config(config_path);
    if (command == "solve")
      cmd_solve(cfg, ctx);
    else if (command == "sweep")
      cmd_sweep(cfg, ctx);
    else if (command == "verify-nagent")
      cmd_verify_nagent(cfg, ctx);
    else if (command == "smc-compare")
      cmd_smc_compare(cfg, ctx);
    else
      throw ConfigError("unknown command '" + command + "'");
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace gmfg
