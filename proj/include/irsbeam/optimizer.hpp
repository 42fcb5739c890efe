// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/fp_transforms.hpp"
#include "irsbeam/rc_solvers.hpp"
#include "irsbeam/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace irsbeam {

enum class RcSolver { Npp, Icu, Admm };

std::string to_string(RcSolver solver);
RcSolver parse_rc_solver(std::string_view text);

struct OptimizeOpts {
  int max_outer_iter = 500;
  double rel_tol = 1e-6;  ///< stop when the relative f1a gain drops below this
  RcSolver rc_solver = RcSolver::Icu;
  ConvexSolver npp_inner = ConvexSolver::Icu;
  SolverOpts inner_opts;
  PowerBisectionOpts power_opts;
  std::uint64_t seed = 0;
  int max_consecutive_rejections = 5;
  double monotone_slack = 1e-9;

  bool operator==(const OptimizeOpts&) const = default;
};

struct IterationRecord {
  double f1a = 0.0;  ///< at alpha = gamma, before this iteration's updates
  double wsr = 0.0;  ///< after this iteration's updates
  RVec gamma;        ///< after this iteration's updates
  bool theta_attempted = false;
  bool theta_accepted = false;
  bool solver_failed = false;
  double wall_ms = 0.0;
};

struct OptimizeTrace {
  std::vector<IterationRecord> records;
  bool converged = false;
  bool theta_frozen = false;
  int warm_start_iterations = 0;  ///< outer iterations spent in the Ideal warm start

  int iterations() const { return static_cast<int>(records.size()); }
  /// f1a at the start of every iteration followed by the final wsr.
  std::vector<double> f1a_sequence() const;
};

struct OptimizeResult {
  BeamformerState state;
  OptimizeTrace trace;
  double wsr = 0.0;
};

/// Zero-forcing on the given channels with equal per-user power P_T / K, or
/// equal-power matched filtering when the channel matrix is rank deficient.
CMat zero_forcing(std::span<const CVec> h, double P_T);

/// Uniform phases on [0, 2 pi) from the counter-based stream of `seed`.
CVec random_phase_theta(int N, std::uint64_t seed);

/// Ideal set: random unit-modulus theta and zero-forcing W. Phase sets: the
/// result of a full Ideal-set optimization, with theta projected onto F.
BeamformerState init_state(const SystemInstance& inst, const FeasibleSet& F, std::uint64_t seed,
                           const OptimizeOpts& opts = {});

/// Alternating optimization from the initialization given by init_state.
OptimizeResult optimize(const SystemInstance& inst, const FeasibleSet& F,
                        const OptimizeOpts& opts = {});

/// Alternating optimization from a caller-supplied feasible state. With
/// fix_theta the reflection step is skipped entirely (transmit-only).
OptimizeResult optimize_from(const SystemInstance& inst, const FeasibleSet& F,
                             BeamformerState start, const OptimizeOpts& opts,
                             bool fix_theta = false);

}  // namespace irsbeam
