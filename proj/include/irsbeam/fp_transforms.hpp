// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/qcqp.hpp"
#include "irsbeam/types.hpp"

#include <span>
#include <vector>

namespace irsbeam {

struct PowerBisectionOpts {
  double tol = 1e-8;  ///< relative, on total power vs P_T
  int max_iter = 200;

  bool operator==(const PowerBisectionOpts&) const = default;
};

/// alpha_k = gamma_k.
RVec update_alpha(const RVec& gamma);

/// omega_k (1 + alpha_k)
RVec alpha_tilde(std::span<const double> omega, const RVec& alpha);

/// Lagrangian-dual-transformed objective, in bits/s/Hz. Equals wsr() when
/// alpha = gamma, which is also its unique maximizer over alpha.
double f1a(const SystemInstance& inst, const CMat& W, const CVec& theta, const RVec& alpha);

// Transmit-side quadratic transform. h are the combined channels.

/// sum_k alpha_tilde_k gamma_k / (1 + gamma_k)
double f2(std::span<const CVec> h, const CMat& W, const RVec& alpha_tilde, double sigma2);

double f2a(std::span<const CVec> h, const CMat& W, const CVec& beta, const RVec& alpha_tilde,
           double sigma2);

CVec update_beta(std::span<const CVec> h, const CMat& W, const RVec& alpha_tilde, double sigma2);
CVec update_beta(const SystemInstance& inst, const CMat& W, const CVec& theta,
                 const RVec& alpha_tilde);

/// Maximizer of f2a over W for fixed beta, as a function of the power dual
/// variable. Shares one eigendecomposition of sum_i |beta_i|^2 h_i h_i^H across
/// all lambda0 values.
class TransmitBeamformer {
 public:
  TransmitBeamformer(std::span<const CVec> h, const CVec& beta, const RVec& alpha_tilde);

  CMat at(double lambda0) const;
  double power_at(double lambda0) const;

  /// Minimal lambda0 >= 0 with total power <= P_T; bisection on lambda0.
  double optimal_dual(double P_T, const PowerBisectionOpts& opts) const;

 private:
  RVec eigenvalues_;
  CMat eigenvectors_;
  CMat projected_;  ///< column k is sqrt(alpha_tilde_k) beta_k V^H h_k
  double zero_threshold_ = 0.0;
};

CMat update_w(std::span<const CVec> h, const CVec& beta, const RVec& alpha_tilde, double P_T,
              const PowerBisectionOpts& opts = {});
CMat update_w(const SystemInstance& inst, const CVec& theta, const CVec& beta,
              const RVec& alpha_tilde, const PowerBisectionOpts& opts = {});

// Reflection-side quadratic transform.

CVec update_epsilon(const LinkTerms& lt, const CVec& theta, const RVec& alpha_tilde,
                    double sigma2);

double f3(const LinkTerms& lt, const CVec& theta, const RVec& alpha_tilde, double sigma2);

double f3a(const LinkTerms& lt, const CVec& theta, const CVec& epsilon, const RVec& alpha_tilde,
           double sigma2);

}  // namespace irsbeam
