// SPDX-License-Identifier: Apache-2.0
// irsbeam: single-instance solves and Monte Carlo sweeps from the command line.
//
// Settings resolve as: command-line flag, then config file, then built-in defaults.
// Exit codes: 0 success, 1 runtime or solver failure, 2 configuration error.

#include "irsbeam/config.hpp"
#include "irsbeam/harness.hpp"
#include "irsbeam/model.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace irsbeam;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> feasible_sets;
  std::vector<std::string> rc_solvers;
  int verbosity = 0;
};

struct SolveArgs {
  int snapshot = 0;
  int realization = 0;
  std::string trace_path;
};

struct BenchArgs {
  std::string output;
  std::string format = "csv";
  std::optional<int> jobs;
  std::optional<int> snapshots;
  std::optional<int> realizations;
  bool no_timing = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "YAML configuration file (default: built-in scenario)");
  cmd->add_option("--seed", c.seed, "Master seed (default: trials.master_seed, else 1)");
  cmd->add_option("--feasible-set", c.feasible_sets,
                  "ideal | continuous | discrete:<levels> (default: methods.feasible_sets, "
                  "else continuous)");
  cmd->add_option("--rc-solver", c.rc_solvers,
                  "npp | icu | admm (default: methods.rc_solvers, else icu)");
  cmd->add_flag("-v,--verbose", c.verbosity, "Progress on stderr; repeat for more");
}

/// Config file plus flag overrides; throws ConfigError on bad input.
BenchConfig resolve(const Common& c) {
  BenchConfig cfg = c.config_path.empty() ? BenchConfig{} : load_config(c.config_path);
  if (c.seed) cfg.master_seed = *c.seed;
  try {
    if (!c.feasible_sets.empty()) {
      cfg.feasible_sets.clear();
      for (const auto& f : c.feasible_sets) cfg.feasible_sets.push_back(FeasibleSet::parse(f));
    }
    if (!c.rc_solvers.empty()) {
      cfg.rc_solvers.clear();
      for (const auto& s : c.rc_solvers) cfg.rc_solvers.push_back(parse_rc_solver(s));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

void validate_or_throw(const BenchConfig& cfg) {
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::string fmt(double x, int precision = 6) {
  std::ostringstream s;
  s << std::setprecision(precision) << x;
  return s.str();
}

int cmd_solve(const Common& common, const SolveArgs& args) {
  BenchConfig cfg = resolve(common);
  if (cfg.feasible_sets.empty()) cfg.feasible_sets = {FeasibleSet::continuous()};
  if (cfg.rc_solvers.empty()) cfg.rc_solvers = {RcSolver::Icu};
  validate_or_throw(cfg);
  if (args.snapshot < 0 || args.realization < 0) {
    throw ConfigError("--snapshot and --realization must be nonnegative");
  }
  const FeasibleSet F = cfg.feasible_sets.front();
  OptimizeOpts opts = cfg.optimizer;
  opts.rc_solver = cfg.rc_solvers.front();
  opts.seed = trial_init_seed(cfg.master_seed, args.snapshot, args.realization);

  const SystemInstance inst =
      gen_instance(cfg.scenario, {cfg.master_seed, static_cast<std::uint32_t>(args.snapshot),
                                  static_cast<std::uint32_t>(args.realization)});
  const OptimizeResult r = optimize(inst, F, opts);

  if (common.verbosity > 0) {
    for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
      const auto& rec = r.trace.records[i];
      std::cerr << "iter " << i << " f1a " << fmt(rec.f1a, 12) << " wsr " << fmt(rec.wsr, 12)
                << (rec.theta_accepted ? "" : " theta-held") << '\n';
    }
  }

  std::cout << "instance  M=" << inst.M << " K=" << inst.K << " N=" << inst.N
            << " P_T_dbm=" << fmt(cfg.scenario.P_T_dbm) << " seed=" << cfg.master_seed
            << " snapshot=" << args.snapshot << " realization=" << args.realization << '\n';
  std::cout << "method    " << joint_method(opts.rc_solver) << " feasible_set=" << F.name() << '\n';
  std::cout << "wsr       " << fmt(r.wsr, 10) << " bits/s/Hz\n";
  std::cout << "iters     " << r.trace.iterations() + r.trace.warm_start_iterations
            << (r.trace.converged ? " (converged)" : " (iteration cap)")
            << (r.trace.theta_frozen ? " theta frozen" : "") << '\n';
  const RVec gamma = sinr(inst, r.state.W, r.state.theta);
  for (int k = 0; k < inst.K; ++k) {
    std::cout << "user " << k << "    sinr_db=" << fmt(10.0 * std::log10(gamma(k)), 8)
              << " rate=" << fmt(std::log2(1.0 + gamma(k)), 8) << '\n';
  }

  if (!args.trace_path.empty()) {
    std::ofstream out(args.trace_path);
    if (!out) throw std::runtime_error("cannot open '" + args.trace_path + "' for writing");
    out << "iteration,f1a,wsr,theta_accepted\n" << std::setprecision(17);
    for (std::size_t i = 0; i < r.trace.records.size(); ++i) {
      const auto& rec = r.trace.records[i];
      out << i << ',' << rec.f1a << ',' << rec.wsr << ',' << (rec.theta_accepted ? 1 : 0) << '\n';
    }
    if (!out) throw std::runtime_error("error writing '" + args.trace_path + "'");
  }
  return kExitOk;
}

void print_summary(const BenchResult& result) {
  std::cout << std::left << std::setw(8) << "P_T_dbm" << std::setw(5) << "N" << std::setw(7)
            << "xi_db" << std::setw(7) << "L_I" << std::setw(12) << "method" << std::setw(13)
            << "feasible_set" << std::right << std::setw(11) << "mean_rate" << std::setw(10)
            << "stderr" << std::setw(10) << "failures" << '\n';
  for (const auto& r : result.rows) {
    std::cout << std::left << std::setw(8) << fmt(r.point.P_T_dbm) << std::setw(5) << r.point.N
              << std::setw(7) << fmt(r.point.xi_db) << std::setw(7) << fmt(r.point.L_I)
              << std::setw(12) << r.method << std::setw(13) << r.feasible_set << std::right
              << std::fixed << std::setprecision(4) << std::setw(11) << r.mean_rate
              << std::setw(10) << r.std_error << std::defaultfloat << std::setw(6)
              << r.n_failures << '/' << std::left << std::setw(3) << r.n_trials << std::right
              << '\n';
  }
}

int run_and_report(const BenchConfig& cfg, const BenchArgs& args, int verbosity) {
  const OutputFormat format = [&] {
    try {
      return parse_output_format(args.format);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  if (verbosity > 0) {
    std::cerr << "running " << sweep_grid(cfg).size() << " grid point(s) x "
              << cfg.snapshots * cfg.realizations << " trial(s) on " << cfg.jobs << " job(s)\n";
  }
  const BenchResult result = run_bench(cfg);
  print_summary(result);

  const std::string path =
      args.output.empty() ? std::string("results.") + (format == OutputFormat::Csv ? "csv" : "json")
                          : args.output;
  emit_results(result, format, path);
  if (verbosity > 0) std::cerr << "wrote " << path << '\n';

  for (const auto& r : result.rows) {
    if (r.n_failures < r.n_trials) return kExitOk;
  }
  std::cerr << "error: every trial failed\n";
  return result.rows.empty() ? kExitOk : kExitRuntime;
}

void apply_bench_args(BenchConfig& cfg, const BenchArgs& args) {
  if (args.jobs) cfg.jobs = *args.jobs;
  if (args.snapshots) cfg.snapshots = *args.snapshots;
  if (args.realizations) cfg.realizations = *args.realizations;
  if (args.no_timing) cfg.record_timing = false;
}

int cmd_bench(const Common& common, const BenchArgs& args) {
  BenchConfig cfg = resolve(common);
  apply_bench_args(cfg, args);
  validate_or_throw(cfg);
  return run_and_report(cfg, args, common.verbosity);
}

int cmd_sweep_demo(const Common& common, const BenchArgs& args) {
  BenchConfig cfg = resolve(common);
  if (common.config_path.empty()) {
    cfg.P_T_dbm = {-5.0, 0.0, 5.0, 10.0};
    if (common.feasible_sets.empty()) {
      cfg.feasible_sets = {FeasibleSet::ideal(), FeasibleSet::continuous(), FeasibleSet::discrete(4),
                           FeasibleSet::discrete(2)};
    }
    cfg.snapshots = 2;
    cfg.realizations = 2;
  }
  apply_bench_args(cfg, args);
  validate_or_throw(cfg);
  return run_and_report(cfg, args, common.verbosity);
}

void add_bench_options(CLI::App* cmd, BenchArgs& b) {
  cmd->add_option("-o,--output", b.output, "Result file (default: results.<format>)");
  cmd->add_option("--format", b.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--jobs", b.jobs, "Worker threads; output is identical for any value (default: trials.jobs, else 1)");
  cmd->add_option("--snapshots", b.snapshots, "User-position snapshots (default: trials.snapshots, else 20)");
  cmd->add_option("--realizations", b.realizations,
                  "Fading realizations per snapshot (default: trials.realizations, else 10)");
  cmd->add_flag("--no-timing", b.no_timing, "Write mean_ms = 0 so reruns are byte-identical");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted sum-rate beamforming for IRS-aided multiuser MISO downlinks", "irsbeam"};
  app.set_version_flag("--version", irsbeam::version());
  app.require_subcommand(1);

  Common common;
  SolveArgs solve_args;
  BenchArgs bench_args;

  auto* solve = app.add_subcommand("solve", "Optimize one generated channel instance");
  add_common(solve, common);
  solve->add_option("--snapshot", solve_args.snapshot, "User-position snapshot index")
      ->capture_default_str();
  solve->add_option("--realization", solve_args.realization, "Fading realization index")
      ->capture_default_str();
  solve->add_option("--trace", solve_args.trace_path, "Write the per-iteration f1a trace as CSV");

  auto* bench = app.add_subcommand("bench", "Run a Monte Carlo sweep and write CSV or JSON");
  add_common(bench, common);
  add_bench_options(bench, bench_args);

  auto* demo = app.add_subcommand(
      "sweep-demo", "Small built-in power sweep (2 x 2 trials, four feasible sets)");
  add_common(demo, common);
  add_bench_options(demo, bench_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(common, solve_args);
    if (*bench) return cmd_bench(common, bench_args);
    if (*demo) return cmd_sweep_demo(common, bench_args);
  } catch (const irsbeam::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
