// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/channel_sim.hpp"
#include "irsbeam/optimizer.hpp"
#include "irsbeam/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace irsbeam {

/// Library version, "<semver>+<git describe>".
std::string version();

/// Monte Carlo sweep description. Empty sweep lists mean "the scenario value";
/// the grid is the cartesian product of the four lists.
struct BenchConfig {
  ScenarioConfig scenario;

  std::vector<double> P_T_dbm;
  std::vector<int> N;
  std::vector<double> xi_db;
  std::vector<double> L_I;

  std::vector<FeasibleSet> feasible_sets{FeasibleSet::continuous()};
  std::vector<RcSolver> rc_solvers{RcSolver::Icu};
  bool baseline_no_irs = true;
  bool baseline_random_theta = true;

  int snapshots = 20;
  int realizations = 10;  ///< per snapshot
  std::uint64_t master_seed = 1;

  OptimizeOpts optimizer;

  int jobs = 1;               ///< worker threads; results do not depend on it
  bool record_timing = true;  ///< false writes mean_ms = 0 for byte-stable output

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const BenchConfig&) const = default;
};

struct GridPoint {
  double P_T_dbm = 0.0;
  int N = 0;
  double xi_db = 0.0;
  double L_I = 0.0;

  bool operator==(const GridPoint&) const = default;
};

/// Grid points in row-major order with L_I varying fastest.
std::vector<GridPoint> sweep_grid(const BenchConfig& cfg);

/// Scenario with the grid point's values substituted.
ScenarioConfig scenario_at(const BenchConfig& cfg, const GridPoint& point);

/// Aggregates for one grid point and one method.
struct MethodStats {
  GridPoint point;
  std::string method;        ///< "baseline1", "baseline2", "joint-<solver>"
  std::string feasible_set;  ///< "none" for baseline1
  double mean_rate = 0.0;    ///< bits/s/Hz over successful trials
  double std_error = 0.0;    ///< sample stddev / sqrt(n_success)
  int n_trials = 0;
  int n_failures = 0;
  double mean_iters = 0.0;
  double mean_ms = 0.0;
  std::vector<double> snapshot_means;  ///< sorted ascending (CDF samples)

  bool operator==(const MethodStats&) const = default;
};

struct BenchResult {
  BenchConfig config;
  std::string version;
  std::vector<MethodStats> rows;

  /// Row for (point, method, feasible_set); throws std::out_of_range if absent.
  const MethodStats& find(const GridPoint& point, const std::string& method,
                          const std::string& feasible_set) const;

  bool operator==(const BenchResult&) const = default;
};

/// Method label used in results for a joint-beamforming solver.
std::string joint_method(RcSolver solver);

/// The alternating optimization with the reflection steps skipped on an N = 0 copy.
OptimizeResult run_baseline_no_irs(const SystemInstance& inst, const OptimizeOpts& opts);

/// Transmit-only optimization with theta fixed at uniform random phases drawn
/// from the random-theta substream of `seed`.
OptimizeResult run_baseline_random_theta(const SystemInstance& inst, const OptimizeOpts& opts,
                                         std::uint64_t seed);

/// Seeds used by run_bench for trial (snapshot, realization).
std::uint64_t trial_init_seed(std::uint64_t master, int snapshot, int realization);
std::uint64_t trial_theta_seed(std::uint64_t master, int snapshot, int realization);

/// Runs every trial at every grid point. Deterministic in master_seed for any
/// number of jobs.
BenchResult run_bench(const BenchConfig& cfg);

enum class OutputFormat { Csv, Json };

OutputFormat parse_output_format(std::string_view text);

/// Header line, without newline.
std::string csv_header();

void write_csv(const BenchResult& result, std::ostream& out);
void write_json(const BenchResult& result, std::ostream& out);
BenchResult read_json(std::istream& in);

/// Writes to `path`; I/O failures raise std::runtime_error naming the path.
void emit_results(const BenchResult& result, OutputFormat format, const std::string& path);
BenchResult load_results_json(const std::string& path);

}  // namespace irsbeam
