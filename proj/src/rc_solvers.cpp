// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/rc_solvers.hpp"

#include "irsbeam/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace irsbeam {

namespace {

constexpr double kTiny = std::numeric_limits<double>::min();

double spectral_norm(const CMat& U) {
  if (U.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMat> eig(U, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

bool small_improvement(double before, double after, double tol) {
  return after - before <= tol * std::max(std::abs(after), kTiny);
}

// Exact maximizer of -A1 |x|^2 + 2 Re{conj(x) A2} over F.
cdouble best_element(double A1, cdouble A2, cdouble current, const FeasibleSet& F) {
  const double r = std::abs(A2);
  if (r == 0.0) {
    if (F.kind() == FeasibleSet::Kind::Ideal && A1 > 0.0) return {0.0, 0.0};
    return current;
  }
  switch (F.kind()) {
    case FeasibleSet::Kind::Ideal:
      return A2 / r * (A1 > r ? r / A1 : 1.0);
    case FeasibleSet::Kind::ContinuousPhase:
      return A2 / r;
    case FeasibleSet::Kind::DiscretePhase:
      return level_point(discrete_level(A2, F.levels()), F.levels());
  }
  return current;
}

SolveReport finish(const QcqpData& q, CVec theta, int iterations, bool converged,
                   std::vector<double> trace) {
  SolveReport report;
  report.f4_value = f4(q, theta);
  report.theta = std::move(theta);
  report.iterations = iterations;
  report.converged = converged;
  report.monotone_trace = std::move(trace);
  return report;
}

// Dual function of the unit-ball problem (constant C included).
double ldd_dual_value(const QcqpData& q, const CVec& theta, const RVec& lambda) {
  return f4(q, theta) - (lambda.array() * (theta.cwiseAbs2().array() - 1.0)).sum();
}

SolveReport solve_ldd_scalar(const QcqpData& q, const SolverOpts& opts, double radius) {
  // One multiplier: the ellipsoid is an interval and each cut halves it.
  RVec lambda = RVec::Zero(1);
  CVec theta = ldd_primal(q, lambda);
  if (std::abs(theta(0)) <= 1.0) {
    auto report = finish(q, theta, 0, true, {f4(q, theta)});
    report.dual = lambda;
    return report;
  }
  double lo = 0.0;
  double hi = radius;
  int iter = 0;
  std::vector<double> trace;
  while (hi - lo > opts.ellipsoid_tol * std::max(1.0, hi) && iter < opts.ellipsoid_max_iter) {
    lambda(0) = 0.5 * (lo + hi);
    theta = ldd_primal(q, lambda);
    if (std::abs(theta(0)) > 1.0) {
      lo = lambda(0);
    } else {
      hi = lambda(0);
    }
    trace.push_back(f4(q, project(theta, FeasibleSet::ideal())));
    ++iter;
  }
  lambda(0) = hi;
  theta = project(ldd_primal(q, lambda), FeasibleSet::ideal());
  auto report = finish(q, theta, iter, iter < opts.ellipsoid_max_iter, std::move(trace));
  report.dual = lambda;
  return report;
}

}  // namespace

CVec ldd_primal(const QcqpData& q, const RVec& lambda) {
  const int N = q.size();
  const double ridge = 1e-10 * (1.0 + spectral_norm(q.U));
  CMat A = q.U;
  for (int n = 0; n < N; ++n) A(n, n) += lambda(n) + ridge;
  return A.ldlt().solve(q.nu);
}

SolveReport solve_ldd(const QcqpData& q, const SolverOpts& opts) {
  const int N = q.size();
  if (N == 0) return finish(q, CVec(0), 0, true, {q.C});
  if (N > kLddMaxElements) {
    std::ostringstream msg;
    msg << "solve_ldd supports N <= " << kLddMaxElements << " (got " << N << ")";
    throw std::invalid_argument(msg.str());
  }

  const double norm_u = spectral_norm(q.U);
  const double ridge = 1e-10 * (1.0 + norm_u);
  // Every optimal multiplier satisfies lambda_n <= |nu_n| + ||U theta||.
  const double radius = std::max({10.0, 10.0 * q.nu.norm(),
                                   2.0 * (q.nu.norm() + std::sqrt(double(N)) * norm_u)});
  if (N == 1) return solve_ldd_scalar(q, opts, radius);

  CMat A = q.U;
  A.diagonal().array() += ridge;
  Eigen::LDLT<CMat> factor;

  auto primal_at = [&](const RVec& lambda) {
    CMat shifted = A;
    shifted.diagonal() += lambda.cast<cdouble>();
    factor.compute(shifted);
    return CVec(factor.solve(q.nu));
  };

  RVec lambda = RVec::Zero(N);
  CVec theta = primal_at(lambda);
  if (theta.cwiseAbs().maxCoeff() <= 1.0) {
    auto report = finish(q, theta, 0, true, {f4(q, theta)});
    report.dual = lambda;
    return report;
  }

  const double n = N;
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(N, N) * radius * radius;
  RVec center = RVec::Zero(N);

  double best_dual = std::numeric_limits<double>::infinity();
  double best_primal = -std::numeric_limits<double>::infinity();
  CVec best_theta = project(theta, FeasibleSet::ideal());
  RVec best_lambda = lambda;
  std::vector<double> trace;
  bool converged = false;
  int iter = 0;

  for (; iter < opts.ellipsoid_max_iter; ++iter) {
    RVec g(N);
    Eigen::Index worst = 0;
    if (center.minCoeff(&worst) < 0.0) {
      // feasibility cut: keep lambda_n >= center_n
      g.setZero();
      g(worst) = -1.0;
    } else {
      theta = primal_at(center);
      const double dual = ldd_dual_value(q, theta, center);
      best_dual = std::min(best_dual, dual);
      const CVec candidate = project(theta, FeasibleSet::ideal());
      const double primal = f4(q, candidate);
      if (primal > best_primal) {
        best_primal = primal;
        best_theta = candidate;
        best_lambda = center;
      }
      trace.push_back(best_primal);
      if (best_dual - best_primal <= opts.ellipsoid_tol * std::max(1.0, std::abs(best_dual))) {
        converged = true;
        break;
      }
      g = (1.0 - theta.cwiseAbs2().array()).matrix();
    }
    const RVec Pg = P * g;
    const double gPg = g.dot(Pg);
    if (!(gPg > 0.0)) {
      converged = true;  // zero subgradient: center is dual optimal
      break;
    }
    if (std::sqrt(gPg) <= opts.ellipsoid_tol * std::max(1.0, std::abs(best_dual)) &&
        std::isfinite(best_dual)) {
      converged = true;  // ellipsoid too small to improve the dual further
      break;
    }
    const RVec step = Pg / std::sqrt(gPg);
    center -= step / (n + 1.0);
    P = (n * n / (n * n - 1.0)) * (P - (2.0 / (n + 1.0)) * step * step.transpose());
    P = (0.5 * (P + P.transpose())).eval();
  }

  auto report = finish(q, best_theta, iter, converged, std::move(trace));
  report.dual = best_lambda;
  return report;
}

cdouble icu_element(const QcqpData& q, const CVec& theta, int n, const FeasibleSet& F) {
  const double A1 = q.U(n, n).real();
  const cdouble A2 = q.nu(n) - (q.U.row(n) * theta)(0) + q.U(n, n) * theta(n);
  return best_element(A1, A2, theta(n), F);
}

SolveReport solve_icu(const QcqpData& q, const CVec& theta_init, const FeasibleSet& F,
                      const SolverOpts& opts) {
  const int N = q.size();
  if (theta_init.size() != N) throw InvalidInstance("theta_init length must match QCQP size");
  CVec theta = in_feasible_set(theta_init, F) ? theta_init : project(theta_init, F);
  double value = f4(q, theta);
  std::vector<double> trace{value};
  if (N == 0) return finish(q, theta, 0, true, std::move(trace));

  bool converged = false;
  int sweep = 0;
  while (sweep < opts.max_iter) {
    ++sweep;
    CVec s = q.U * theta;
    bool changed = false;
    for (int n = 0; n < N; ++n) {
      const cdouble old = theta(n);
      const cdouble A2 = q.nu(n) - s(n) + q.U(n, n) * old;
      const cdouble updated = best_element(q.U(n, n).real(), A2, old, F);
      if (updated != old) {
        s += q.U.col(n) * (updated - old);
        theta(n) = updated;
        changed = true;
      }
    }
    const double next = f4(q, theta);
    trace.push_back(next);
    const bool flat = small_improvement(value, next, opts.tol);
    value = next;
    if (!changed || flat) {
      converged = true;
      break;
    }
  }
  return finish(q, theta, sweep, converged, std::move(trace));
}

double select_mu(const CMat& U) {
  if (U.size() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<CMat> eig(U, Eigen::EigenvaluesOnly);
  const double norm2 = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double top = eig.eigenvalues().maxCoeff();
  if (norm2 == 0.0) return 1.0;
  for (int iota = 1; iota < 1000; ++iota) {
    const double mu = iota * norm2;
    if (mu / 2.0 - top > 0.0) return mu;
  }
  throw SolverFailure("select_mu: no admissible penalty");
}

AdmmIteration::AdmmIteration(const QcqpData& q, const CVec& theta_init, const FeasibleSet& F,
                             double mu, std::optional<CVec> lambda_init)
    : data_(&q), F_(F), mu_(mu), theta_(theta_init), q_(theta_init) {
  if (!(mu > 0.0)) throw std::invalid_argument("ADMM penalty must be positive");
  if (theta_init.size() != q.size()) throw InvalidInstance("theta_init length must match QCQP size");
  CMat system = 2.0 * q.U;
  system.diagonal().array() += mu;
  factor_.compute(system);
  if (factor_.info() != Eigen::Success) throw SolverFailure("ADMM: 2U + mu I not positive definite");
  lambda_ = lambda_init ? *lambda_init : CVec(2.0 * (q.U * q_) - 2.0 * q.nu);
}

void AdmmIteration::step() {
  theta_ = project(CVec(q_ - lambda_ / mu_), F_);
  q_ = factor_.solve(2.0 * data_->nu + lambda_ + mu_ * theta_);
  lambda_ -= mu_ * (q_ - theta_);
  ++iterations_;
}

double AdmmIteration::lyapunov() const {
  const CMat& U = data_->U;
  const CVec Uq = U * q_;
  const double quad = mu_ / 2.0 * q_.squaredNorm() - std::real(q_.dot(Uq));
  const double lin = std::real(2.0 * data_->nu.dot(theta_) - 2.0 * Uq.dot(theta_) +
                               mu_ * theta_.dot(q_));
  return -quad - mu_ / 2.0 * theta_.squaredNorm() + lin;
}

SolveReport solve_admm(const QcqpData& q, const CVec& theta_init, const FeasibleSet& F,
                       const SolverOpts& opts) {
  const int N = q.size();
  if (theta_init.size() != N) throw InvalidInstance("theta_init length must match QCQP size");
  const CVec start = in_feasible_set(theta_init, F) ? theta_init : project(theta_init, F);
  if (N == 0) return finish(q, start, 0, true, {q.C});

  const double mu = opts.admm_mu_override.value_or(select_mu(q.U));
  AdmmIteration admm(q, start, F, mu);

  CVec best = start;
  double best_value = f4(q, start);
  double previous = best_value;
  std::vector<double> trace{best_value};
  bool converged = false;
  while (admm.iterations() < opts.max_iter) {
    admm.step();
    const double value = f4(q, admm.theta());
    trace.push_back(value);
    if (value > best_value) {
      best_value = value;
      best = admm.theta();
    }
    const double residual = (admm.q() - admm.theta()).cwiseAbs().maxCoeff();
    if (residual < opts.tol && std::abs(value - previous) <= opts.tol * std::max(std::abs(value), kTiny)) {
      converged = true;
      break;
    }
    previous = value;
  }
  return finish(q, best, admm.iterations(), converged, std::move(trace));
}

std::string to_string(ConvexSolver solver) {
  switch (solver) {
    case ConvexSolver::Ldd:
      return "ldd";
    case ConvexSolver::Icu:
      return "icu";
    case ConvexSolver::Admm:
      return "admm";
  }
  return {};
}

ConvexSolver parse_convex_solver(std::string_view text) {
  if (text == "ldd") return ConvexSolver::Ldd;
  if (text == "icu") return ConvexSolver::Icu;
  if (text == "admm") return ConvexSolver::Admm;
  throw std::invalid_argument("unknown convex solver '" + std::string(text) +
                              "' (expected ldd, icu or admm)");
}

SolveReport solve_npp(const QcqpData& q, const FeasibleSet& F, ConvexSolver inner,
                      const SolverOpts& opts, std::optional<CVec> theta_init) {
  const auto ideal = FeasibleSet::ideal();
  const CVec start = theta_init ? project(*theta_init, ideal) : CVec(CVec::Zero(q.size()));
  SolveReport convex;
  switch (inner) {
    case ConvexSolver::Ldd:
      convex = solve_ldd(q, opts);
      break;
    case ConvexSolver::Icu:
      convex = solve_icu(q, start, ideal, opts);
      break;
    case ConvexSolver::Admm:
      convex = solve_admm(q, start, ideal, opts);
      break;
  }
  if (F.kind() == FeasibleSet::Kind::Ideal) return convex;
  convex.theta = project(convex.theta, F);
  convex.f4_value = f4(q, convex.theta);
  convex.monotone_trace.push_back(convex.f4_value);
  return convex;
}

}  // namespace irsbeam
