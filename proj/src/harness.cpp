// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/harness.hpp"

#include "irsbeam/model.hpp"
#include "irsbeam/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#ifndef IRSBEAM_VERSION
#define IRSBEAM_VERSION "0.1.0+unknown"
#endif

namespace irsbeam {

std::string version() { return IRSBEAM_VERSION; }

void BenchConfig::validate() const {
  scenario.validate();
  auto fail = [](const std::string& field, const std::string& what) {
    throw std::invalid_argument(field + ": " + what);
  };
  for (int n : N) {
    if (n < 0) fail("sweep.N", "values must be nonnegative");
  }
  if (feasible_sets.empty() && !baseline_no_irs && !baseline_random_theta) {
    fail("methods", "no method selected");
  }
  if (!feasible_sets.empty() && rc_solvers.empty()) {
    fail("methods.rc_solvers", "must be nonempty when feasible_sets is");
  }
  if (snapshots <= 0) fail("trials.snapshots", "must be positive");
  if (realizations <= 0) fail("trials.realizations", "must be positive");
  if (jobs <= 0) fail("trials.jobs", "must be positive");
  if (optimizer.max_outer_iter <= 0) fail("optimizer.max_outer_iter", "must be positive");
  if (!(optimizer.rel_tol >= 0.0)) fail("optimizer.rel_tol", "must be nonnegative");
  if (optimizer.inner_opts.max_iter <= 0) fail("optimizer.max_inner_iter", "must be positive");
  if (optimizer.power_opts.max_iter <= 0) fail("optimizer.power_max_iter", "must be positive");
}

std::vector<GridPoint> sweep_grid(const BenchConfig& cfg) {
  const auto& s = cfg.scenario;
  const auto P = cfg.P_T_dbm.empty() ? std::vector<double>{s.P_T_dbm} : cfg.P_T_dbm;
  const auto N = cfg.N.empty() ? std::vector<int>{s.N} : cfg.N;
  const auto xi = cfg.xi_db.empty() ? std::vector<double>{s.xi_db} : cfg.xi_db;
  const auto L = cfg.L_I.empty() ? std::vector<double>{s.L_I} : cfg.L_I;
  std::vector<GridPoint> grid;
  grid.reserve(P.size() * N.size() * xi.size() * L.size());
  for (double p : P)
    for (int n : N)
      for (double x : xi)
        for (double l : L) grid.push_back({p, n, x, l});
  return grid;
}

ScenarioConfig scenario_at(const BenchConfig& cfg, const GridPoint& point) {
  ScenarioConfig s = cfg.scenario;
  s.P_T_dbm = point.P_T_dbm;
  s.N = point.N;
  s.xi_db = point.xi_db;
  s.L_I = point.L_I;
  return s;
}

const MethodStats& BenchResult::find(const GridPoint& point, const std::string& method,
                                     const std::string& feasible_set) const {
  for (const auto& row : rows) {
    if (row.point == point && row.method == method && row.feasible_set == feasible_set) return row;
  }
  throw std::out_of_range("no result row for method " + method + " / " + feasible_set);
}

std::string joint_method(RcSolver solver) { return "joint-" + to_string(solver); }

OptimizeResult run_baseline_no_irs(const SystemInstance& inst, const OptimizeOpts& opts) {
  return optimize(inst.without_irs(), FeasibleSet::ideal(), opts);
}

OptimizeResult run_baseline_random_theta(const SystemInstance& inst, const OptimizeOpts& opts,
                                         std::uint64_t seed) {
  inst.validate();
  CounterRng rng(seed, static_cast<std::uint32_t>(Stream::RandomTheta), 0, 0);
  BeamformerState start;
  start.theta.resize(inst.N);
  for (int n = 0; n < inst.N; ++n) {
    start.theta(n) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  }
  start.W = zero_forcing(combined_channel(inst, start.theta), inst.P_T);
  return optimize_from(inst, FeasibleSet::continuous(), std::move(start), opts, true);
}

std::uint64_t trial_init_seed(std::uint64_t master, int snapshot, int realization) {
  return derive_seed(master, static_cast<std::uint32_t>(snapshot),
                     static_cast<std::uint32_t>(realization), Stream::InitialTheta);
}

std::uint64_t trial_theta_seed(std::uint64_t master, int snapshot, int realization) {
  return derive_seed(master, static_cast<std::uint32_t>(snapshot),
                     static_cast<std::uint32_t>(realization), Stream::RandomTheta);
}

namespace {

using Clock = std::chrono::steady_clock;

enum class MethodKind { NoIrs, RandomTheta, Joint };

struct MethodSpec {
  MethodKind kind;
  RcSolver solver = RcSolver::Icu;
  FeasibleSet F = FeasibleSet::ideal();
  std::string method;
  std::string feasible_set;
};

struct TrialValue {
  double rate = 0.0;
  int iterations = 0;
  double ms = 0.0;
  bool failed = false;
};

std::vector<MethodSpec> method_list(const BenchConfig& cfg) {
  std::vector<MethodSpec> methods;
  if (cfg.baseline_no_irs) {
    methods.push_back({MethodKind::NoIrs, RcSolver::Icu, FeasibleSet::ideal(), "baseline1", "none"});
  }
  if (cfg.baseline_random_theta) {
    methods.push_back({MethodKind::RandomTheta, RcSolver::Icu, FeasibleSet::continuous(),
                       "baseline2", FeasibleSet::continuous().name()});
  }
  for (RcSolver solver : cfg.rc_solvers) {
    for (const auto& F : cfg.feasible_sets) {
      methods.push_back({MethodKind::Joint, solver, F, joint_method(solver), F.name()});
    }
  }
  return methods;
}

double elapsed_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Baseline {
  bool ok = false;
  double rate = 0.0;
  BeamformerState state;  ///< expressed on the full instance
};

/// Runs all methods on one instance. Joint runs that end below a baseline
/// whose final state is feasible in F are restarted from that state, which
/// the monotone guard cannot leave; the better of the two runs is kept.
std::vector<TrialValue> run_trial(const BenchConfig& cfg, const ScenarioConfig& scenario,
                                  const std::vector<MethodSpec>& methods, int snapshot,
                                  int realization) {
  const SystemInstance inst =
      gen_instance(scenario, {cfg.master_seed, static_cast<std::uint32_t>(snapshot),
                              static_cast<std::uint32_t>(realization)});
  OptimizeOpts opts = cfg.optimizer;
  opts.seed = trial_init_seed(cfg.master_seed, snapshot, realization);

  std::vector<TrialValue> values(methods.size());
  Baseline b1, b2;

  auto timed = [&](TrialValue& v, auto&& body) {
    const auto t0 = Clock::now();
    try {
      body();
    } catch (const std::exception&) {
      v.failed = true;
    }
    v.ms = cfg.record_timing ? elapsed_ms(t0) : 0.0;
  };

  for (std::size_t m = 0; m < methods.size(); ++m) {
    const auto& spec = methods[m];
    auto& v = values[m];
    if (spec.kind == MethodKind::NoIrs) {
      timed(v, [&] {
        auto r = run_baseline_no_irs(inst, opts);
        v.rate = r.wsr;
        v.iterations = r.trace.iterations();
        b1 = {true, r.wsr, std::move(r.state)};
        b1.state.theta = CVec::Zero(inst.N);
      });
    } else if (spec.kind == MethodKind::RandomTheta) {
      timed(v, [&] {
        auto r = run_baseline_random_theta(
            inst, opts, trial_theta_seed(cfg.master_seed, snapshot, realization));
        v.rate = r.wsr;
        v.iterations = r.trace.iterations();
        b2 = {true, r.wsr, std::move(r.state)};
      });
    }
  }

  for (RcSolver solver : cfg.rc_solvers) {
    opts.rc_solver = solver;
    std::optional<OptimizeResult> ideal;
    double ideal_ms = 0.0;
    bool ideal_failed = false;

    for (std::size_t m = 0; m < methods.size(); ++m) {
      const auto& spec = methods[m];
      if (spec.kind != MethodKind::Joint || spec.solver != solver) continue;
      auto& v = values[m];

      if (!ideal && !ideal_failed) {
        const auto t0 = Clock::now();
        try {
          ideal = optimize_from(inst, FeasibleSet::ideal(),
                                init_state(inst, FeasibleSet::ideal(), opts.seed, opts), opts);
        } catch (const std::exception&) {
          ideal_failed = true;
        }
        ideal_ms = cfg.record_timing ? elapsed_ms(t0) : 0.0;
      }
      if (ideal_failed) {
        v.failed = true;
        continue;
      }

      timed(v, [&] {
        OptimizeResult r;
        if (spec.F.kind() == FeasibleSet::Kind::Ideal || inst.N == 0) {
          r = *ideal;
        } else {
          BeamformerState start = ideal->state;
          start.theta = project(start.theta, spec.F);
          r = optimize_from(inst, spec.F, std::move(start), opts);
          r.trace.warm_start_iterations = ideal->trace.iterations();
        }
        double rate = r.wsr;
        int iterations = r.trace.iterations() + r.trace.warm_start_iterations;

        for (const Baseline* b : {&b1, &b2}) {
          if (!b->ok || rate >= b->rate || !in_feasible_set(b->state.theta, spec.F)) continue;
          auto retry = optimize_from(inst, spec.F, b->state, opts);
          iterations += retry.trace.iterations();
          rate = std::max(rate, retry.wsr);
        }
        v.rate = rate;
        v.iterations = iterations;
      });
      v.ms += ideal_ms;
    }
  }
  return values;
}

MethodStats aggregate(const GridPoint& point, const MethodSpec& spec, const BenchConfig& cfg,
                      const std::vector<std::vector<TrialValue>>& trials, std::size_t m) {
  MethodStats s;
  s.point = point;
  s.method = spec.method;
  s.feasible_set = spec.feasible_set;
  s.n_trials = static_cast<int>(trials.size());

  double sum = 0.0, iters = 0.0, ms = 0.0;
  int ok = 0;
  for (const auto& t : trials) {
    const auto& v = t[m];
    if (v.failed) {
      ++s.n_failures;
      continue;
    }
    ++ok;
    sum += v.rate;
    iters += v.iterations;
    ms += v.ms;
  }
  if (ok == 0) {
    s.mean_rate = s.std_error = s.mean_iters = s.mean_ms = std::nan("");
    return s;
  }
  s.mean_rate = sum / ok;
  s.mean_iters = iters / ok;
  s.mean_ms = ms / ok;

  double ss = 0.0;
  for (const auto& t : trials) {
    if (!t[m].failed) ss += (t[m].rate - s.mean_rate) * (t[m].rate - s.mean_rate);
  }
  s.std_error = ok > 1 ? std::sqrt(ss / (ok - 1)) / std::sqrt(static_cast<double>(ok)) : 0.0;

  for (int snap = 0; snap < cfg.snapshots; ++snap) {
    double snap_sum = 0.0;
    int snap_ok = 0;
    for (int r = 0; r < cfg.realizations; ++r) {
      const auto& v = trials[static_cast<std::size_t>(snap * cfg.realizations + r)][m];
      if (v.failed) continue;
      snap_sum += v.rate;
      ++snap_ok;
    }
    if (snap_ok > 0) s.snapshot_means.push_back(snap_sum / snap_ok);
  }
  std::sort(s.snapshot_means.begin(), s.snapshot_means.end());
  return s;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  cfg.validate();
  const auto grid = sweep_grid(cfg);
  const auto methods = method_list(cfg);
  const std::size_t per_point = static_cast<std::size_t>(cfg.snapshots) * cfg.realizations;
  const std::size_t total = grid.size() * per_point;

  std::vector<ScenarioConfig> scenarios;
  for (const auto& p : grid) {
    scenarios.push_back(scenario_at(cfg, p));
    scenarios.back().validate();
  }

  std::vector<std::vector<TrialValue>> values(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      const std::size_t g = i / per_point;
      const int t = static_cast<int>(i % per_point);
      try {
        values[i] = run_trial(cfg, scenarios[g], methods, t / cfg.realizations,
                              t % cfg.realizations);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = total;
      }
    }
  };

  const int jobs = static_cast<int>(std::min<std::size_t>(cfg.jobs, std::max<std::size_t>(total, 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  BenchResult result;
  result.config = cfg;
  result.version = version();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const std::vector<std::vector<TrialValue>> point_trials(
        values.begin() + static_cast<std::ptrdiff_t>(g * per_point),
        values.begin() + static_cast<std::ptrdiff_t>((g + 1) * per_point));
    for (std::size_t m = 0; m < methods.size(); ++m) {
      result.rows.push_back(aggregate(grid[g], methods[m], cfg, point_trials, m));
    }
  }
  return result;
}

}  // namespace irsbeam
