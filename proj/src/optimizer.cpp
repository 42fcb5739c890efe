// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/optimizer.hpp"

#include "irsbeam/model.hpp"
#include "irsbeam/qcqp.hpp"
#include "irsbeam/rng.hpp"

#include <Eigen/SVD>

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace irsbeam {

std::string to_string(RcSolver solver) {
  switch (solver) {
    case RcSolver::Npp:
      return "npp";
    case RcSolver::Icu:
      return "icu";
    case RcSolver::Admm:
      return "admm";
  }
  return {};
}

RcSolver parse_rc_solver(std::string_view text) {
  if (text == "npp") return RcSolver::Npp;
  if (text == "icu") return RcSolver::Icu;
  if (text == "admm") return RcSolver::Admm;
  throw std::invalid_argument("unknown rc solver '" + std::string(text) +
                              "' (expected npp, icu or admm)");
}

std::vector<double> OptimizeTrace::f1a_sequence() const {
  std::vector<double> seq;
  seq.reserve(records.size() + 1);
  for (const auto& r : records) seq.push_back(r.f1a);
  if (!records.empty()) seq.push_back(records.back().wsr);
  return seq;
}

CMat zero_forcing(std::span<const CVec> h, double P_T) {
  const auto K = static_cast<Eigen::Index>(h.size());
  const Eigen::Index M = h.front().size();
  CMat H(M, K);
  for (Eigen::Index k = 0; k < K; ++k) H.col(k) = h[k];
  const double per_user = std::sqrt(P_T / static_cast<double>(K));

  CMat W;
  bool full_rank = K <= M;
  if (full_rank) {
    Eigen::JacobiSVD<CMat> svd(H);
    const auto& s = svd.singularValues();
    full_rank = s.size() > 0 && s(s.size() - 1) > 1e-10 * s(0);
  }
  if (full_rank) {
    W = H * (H.adjoint() * H).ldlt().solve(CMat::Identity(K, K));
  } else {
    W = H;  // matched filter
  }
  for (Eigen::Index k = 0; k < K; ++k) {
    const double norm = W.col(k).norm();
    if (norm > 0.0) {
      W.col(k) *= per_user / norm;
    }
  }
  return W;
}

CVec random_phase_theta(int N, std::uint64_t seed) {
  CounterRng rng(seed, static_cast<std::uint32_t>(Stream::InitialTheta), 0, 0);
  CVec theta(N);
  for (int n = 0; n < N; ++n) theta(n) = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
  return theta;
}

namespace {

BeamformerState ideal_start(const SystemInstance& inst, std::uint64_t seed) {
  BeamformerState s;
  s.theta = random_phase_theta(inst.N, seed);
  const auto h = combined_channel(inst, s.theta);
  s.W = zero_forcing(h, inst.P_T);
  s.alpha = sinr(h, s.W, inst.sigma2);
  s.beta = CVec::Zero(inst.K);
  s.epsilon = CVec::Zero(inst.K);
  return s;
}

SolveReport run_rc_solver(const QcqpData& q, const CVec& theta, const FeasibleSet& F,
                          const OptimizeOpts& opts) {
  switch (opts.rc_solver) {
    case RcSolver::Npp:
      return solve_npp(q, F, opts.npp_inner, opts.inner_opts, theta);
    case RcSolver::Icu:
      return solve_icu(q, theta, F, opts.inner_opts);
    case RcSolver::Admm:
      return solve_admm(q, theta, F, opts.inner_opts);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

BeamformerState init_state(const SystemInstance& inst, const FeasibleSet& F, std::uint64_t seed,
                           const OptimizeOpts& opts) {
  inst.validate();
  BeamformerState s = ideal_start(inst, seed);
  if (F.kind() == FeasibleSet::Kind::Ideal || inst.N == 0) return s;
  auto warm = optimize_from(inst, FeasibleSet::ideal(), std::move(s), opts);
  warm.state.theta = project(warm.state.theta, F);
  return warm.state;
}

OptimizeResult optimize(const SystemInstance& inst, const FeasibleSet& F, const OptimizeOpts& opts) {
  inst.validate();
  BeamformerState start = ideal_start(inst, opts.seed);
  if (F.kind() == FeasibleSet::Kind::Ideal || inst.N == 0) {
    return optimize_from(inst, F, std::move(start), opts);
  }
  auto warm = optimize_from(inst, FeasibleSet::ideal(), std::move(start), opts);
  warm.state.theta = project(warm.state.theta, F);
  auto result = optimize_from(inst, F, std::move(warm.state), opts);
  result.trace.warm_start_iterations = warm.trace.iterations();
  return result;
}

OptimizeResult optimize_from(const SystemInstance& inst, const FeasibleSet& F,
                             BeamformerState start, const OptimizeOpts& opts, bool fix_theta) {
  using Clock = std::chrono::steady_clock;
  inst.validate();
  if (start.W.rows() != inst.M || start.W.cols() != inst.K) throw InvalidInstance("W must be M x K");
  if (start.theta.size() != inst.N) throw InvalidInstance("theta length must equal N");
  if (!in_feasible_set(start.theta, F)) {
    throw std::invalid_argument("initial theta is outside feasible set " + F.name());
  }

  CMat W = std::move(start.W);
  CVec theta = std::move(start.theta);
  CVec beta = CVec::Zero(inst.K);
  CVec epsilon = CVec::Zero(inst.K);

  auto h = combined_channel(inst, theta);
  RVec gamma = sinr(h, W, inst.sigma2);
  double previous = wsr(inst.omega, gamma);

  OptimizeResult result;
  auto& trace = result.trace;
  bool frozen = fix_theta || inst.N == 0;
  int rejections = 0;

  for (int iter = 0; iter < opts.max_outer_iter; ++iter) {
    const auto t0 = Clock::now();
    IterationRecord rec;

    const RVec alpha = update_alpha(gamma);
    rec.f1a = f1a(inst, W, theta, alpha);
    const RVec weights = alpha_tilde(inst.omega, alpha);

    beta = update_beta(h, W, weights, inst.sigma2);
    W = update_w(h, beta, weights, inst.P_T, opts.power_opts);

    if (!frozen) {
      rec.theta_attempted = true;
      const LinkTerms lt = link_terms(inst, W);
      epsilon = update_epsilon(lt, theta, weights, inst.sigma2);
      const QcqpData q = build_qcqp(lt, epsilon, weights, inst.sigma2);
      const double current = f4(q, theta);
      try {
        SolveReport report = run_rc_solver(q, theta, F, opts);
        if (in_feasible_set(report.theta, F) && f4(q, report.theta) >= current) {
          theta = std::move(report.theta);
          rec.theta_accepted = true;
        }
      } catch (const SolverFailure&) {
        rec.solver_failed = true;
      }
      if (rec.theta_accepted) {
        rejections = 0;
        h = combined_channel(inst, theta);
      } else if (++rejections >= opts.max_consecutive_rejections) {
        frozen = true;
        trace.theta_frozen = true;
      }
    }

    gamma = sinr(h, W, inst.sigma2);
    const double current = wsr(inst.omega, gamma);
    if (current < rec.f1a - opts.monotone_slack * std::max(1.0, std::abs(rec.f1a))) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "f1a decreased at iteration " << iter << ": " << rec.f1a << " -> " << current;
      throw InternalConsistencyError(msg.str());
    }
    rec.wsr = current;
    rec.gamma = gamma;
    rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    trace.records.push_back(std::move(rec));

    const bool flat =
        current - previous <= opts.rel_tol * std::max(std::abs(previous), std::numeric_limits<double>::min());
    previous = current;
    if (flat) {
      trace.converged = true;
      break;
    }
  }

  result.state.W = std::move(W);
  result.state.theta = std::move(theta);
  result.state.alpha = gamma;
  result.state.beta = std::move(beta);
  result.state.epsilon = std::move(epsilon);
  result.wsr = previous;
  check_state(inst, result.state, F);
  return result;
}

}  // namespace irsbeam
