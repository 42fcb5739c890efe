// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/qcqp.hpp"
#include "irsbeam/types.hpp"

#include <Eigen/Cholesky>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace irsbeam {

struct SolverOpts {
  int max_iter = 2000;        ///< ICU sweeps / ADMM iterations
  double tol = 1e-8;          ///< relative f4 improvement threshold
  double ellipsoid_tol = 1e-9;
  int ellipsoid_max_iter = 500000;
  std::optional<double> admm_mu_override;

  bool operator==(const SolverOpts&) const = default;
};

struct SolveReport {
  CVec theta;
  double f4_value = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> monotone_trace;  ///< f4 after each sweep / iteration
  RVec dual;                           ///< LDD multipliers; empty for other solvers
};

/// Largest N handled by solve_ldd; the ellipsoid method costs O(N^2) cuts of
/// O(N^3) each.
inline constexpr int kLddMaxElements = 64;

/// Lagrange dual decomposition of the unit-ball QCQP with an ellipsoid method
/// on the multipliers. Ideal set only.
SolveReport solve_ldd(const QcqpData& q, const SolverOpts& opts = {});

/// theta(lambda) = (diag(lambda) + U + ridge I)^{-1} nu.
CVec ldd_primal(const QcqpData& q, const RVec& lambda);

/// Exact maximizer of f4 over theta_n in F with every other element fixed.
cdouble icu_element(const QcqpData& q, const CVec& theta, int n, const FeasibleSet& F);

/// Cyclic element-wise ascent from theta_init, n = 0..N-1 repeatedly.
SolveReport solve_icu(const QcqpData& q, const CVec& theta_init, const FeasibleSet& F,
                      const SolverOpts& opts = {});

/// mu = iota ||U||_2 with iota the least integer making mu/2 I - U positive
/// definite; 1 when U = 0.
double select_mu(const CMat& U);

/// The split (theta, q) iteration with the unscaled multiplier lambda_bar.
/// Exposed step by step so the Lyapunov value and dual identity can be checked.
class AdmmIteration {
 public:
  /// q^0 = theta^0 = theta_init; lambda_bar^0 = 2 U q^0 - 2 nu unless given.
  AdmmIteration(const QcqpData& q, const CVec& theta_init, const FeasibleSet& F, double mu,
                std::optional<CVec> lambda_init = std::nullopt);

  void step();

  const CVec& theta() const { return theta_; }
  const CVec& q() const { return q_; }
  const CVec& lambda() const { return lambda_; }
  double mu() const { return mu_; }
  int iterations() const { return iterations_; }

  /// V(q, theta) with theta feasible (indicator term zero).
  double lyapunov() const;

 private:
  const QcqpData* data_;
  FeasibleSet F_;
  double mu_;
  Eigen::LLT<CMat> factor_;  ///< 2U + mu I
  CVec theta_;
  CVec q_;
  CVec lambda_;
  int iterations_ = 0;
};

SolveReport solve_admm(const QcqpData& q, const CVec& theta_init, const FeasibleSet& F,
                       const SolverOpts& opts = {});

enum class ConvexSolver { Ldd, Icu, Admm };

std::string to_string(ConvexSolver solver);
ConvexSolver parse_convex_solver(std::string_view text);

/// Solve the unit-ball relaxation with `inner`, then project elementwise onto F.
SolveReport solve_npp(const QcqpData& q, const FeasibleSet& F, ConvexSolver inner,
                      const SolverOpts& opts = {}, std::optional<CVec> theta_init = std::nullopt);

}  // namespace irsbeam
