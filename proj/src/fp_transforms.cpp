// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/fp_transforms.hpp"

#include "irsbeam/model.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <sstream>

namespace irsbeam {

namespace {

// |h_k^H w_i|^2 summed over i, plus noise.
double received_power(const CVec& h, const CMat& W, double sigma2) {
  return (h.adjoint() * W).cwiseAbs2().sum() + sigma2;
}

}  // namespace

RVec update_alpha(const RVec& gamma) { return gamma; }

RVec alpha_tilde(std::span<const double> omega, const RVec& alpha) {
  RVec out(alpha.size());
  for (Eigen::Index k = 0; k < alpha.size(); ++k) out(k) = omega[k] * (1.0 + alpha(k));
  return out;
}

double f1a(const SystemInstance& inst, const CMat& W, const CVec& theta, const RVec& alpha) {
  const RVec gamma = sinr(inst, W, theta);
  double nats = 0.0;
  for (int k = 0; k < inst.K; ++k) {
    const double w = inst.omega[k];
    nats += w * std::log1p(alpha(k)) - w * alpha(k) +
            w * (1.0 + alpha(k)) * gamma(k) / (1.0 + gamma(k));
  }
  return nats / std::numbers::ln2;
}

double f2(std::span<const CVec> h, const CMat& W, const RVec& alpha_tilde, double sigma2) {
  double value = 0.0;
  for (Eigen::Index k = 0; k < W.cols(); ++k) {
    value += alpha_tilde(k) * std::norm(h[k].dot(W.col(k))) / received_power(h[k], W, sigma2);
  }
  return value;
}

double f2a(std::span<const CVec> h, const CMat& W, const CVec& beta, const RVec& alpha_tilde,
           double sigma2) {
  double value = 0.0;
  for (Eigen::Index k = 0; k < W.cols(); ++k) {
    const cdouble signal = h[k].dot(W.col(k));  // h_k^H w_k
    value += 2.0 * std::sqrt(alpha_tilde(k)) * std::real(std::conj(beta(k)) * signal) -
             std::norm(beta(k)) * received_power(h[k], W, sigma2);
  }
  return value;
}

CVec update_beta(std::span<const CVec> h, const CMat& W, const RVec& alpha_tilde, double sigma2) {
  CVec beta(W.cols());
  for (Eigen::Index k = 0; k < W.cols(); ++k) {
    beta(k) = std::sqrt(alpha_tilde(k)) * h[k].dot(W.col(k)) / received_power(h[k], W, sigma2);
  }
  return beta;
}

CVec update_beta(const SystemInstance& inst, const CMat& W, const CVec& theta,
                 const RVec& alpha_tilde) {
  const auto h = combined_channel(inst, theta);
  return update_beta(h, W, alpha_tilde, inst.sigma2);
}

TransmitBeamformer::TransmitBeamformer(std::span<const CVec> h, const CVec& beta,
                                       const RVec& alpha_tilde) {
  const auto K = static_cast<Eigen::Index>(h.size());
  if (K == 0) throw InvalidInstance("no users");
  const Eigen::Index M = h.front().size();
  CMat A = CMat::Zero(M, M);
  for (Eigen::Index i = 0; i < K; ++i) A.noalias() += std::norm(beta(i)) * (h[i] * h[i].adjoint());
  A = (0.5 * (A + A.adjoint())).eval();

  Eigen::SelfAdjointEigenSolver<CMat> eig(A);
  eigenvalues_ = eig.eigenvalues().cwiseMax(0.0);
  eigenvectors_ = eig.eigenvectors();
  zero_threshold_ = 1e-14 * eigenvalues_.maxCoeff();

  projected_.resize(M, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    projected_.col(k) = std::sqrt(alpha_tilde(k)) * beta(k) * (eigenvectors_.adjoint() * h[k]);
  }
  // Components outside the range of A are round-off: h_k lies in that range
  // whenever beta_k != 0.
  for (Eigen::Index m = 0; m < M; ++m) {
    if (eigenvalues_(m) <= zero_threshold_) projected_.row(m).setZero();
  }
}

CMat TransmitBeamformer::at(double lambda0) const {
  RVec inv(eigenvalues_.size());
  for (Eigen::Index m = 0; m < inv.size(); ++m) {
    const double d = eigenvalues_(m) + lambda0;
    inv(m) = d > zero_threshold_ ? 1.0 / d : 0.0;
  }
  return eigenvectors_ * (inv.asDiagonal() * projected_);
}

double TransmitBeamformer::power_at(double lambda0) const {
  double power = 0.0;
  for (Eigen::Index m = 0; m < eigenvalues_.size(); ++m) {
    const double d = eigenvalues_(m) + lambda0;
    if (!(d > zero_threshold_)) continue;
    power += projected_.row(m).squaredNorm() / (d * d);
  }
  return power;
}

double TransmitBeamformer::optimal_dual(double P_T, const PowerBisectionOpts& opts) const {
  if (power_at(0.0) <= P_T) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  int iter = 0;
  while (power_at(hi) > P_T) {
    lo = hi;
    hi *= 2.0;
    if (++iter >= opts.max_iter) throw SolverFailure("power bisection could not bracket lambda0");
  }
  while (P_T - power_at(hi) > opts.tol * P_T) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted at double precision
    if (power_at(mid) > P_T) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (++iter >= opts.max_iter) {
      std::ostringstream msg;
      msg << "power bisection did not converge in " << opts.max_iter << " iterations";
      throw SolverFailure(msg.str());
    }
  }
  return hi;
}

CMat update_w(std::span<const CVec> h, const CVec& beta, const RVec& alpha_tilde, double P_T,
              const PowerBisectionOpts& opts) {
  const TransmitBeamformer tb(h, beta, alpha_tilde);
  const double lambda0 = tb.optimal_dual(P_T, opts);
  CMat W = tb.at(lambda0);
  // With lambda0 > 0 the power constraint is active; land on it exactly.
  const double power = W.squaredNorm();
  if (lambda0 > 0.0 && power > 0.0) W *= std::sqrt(P_T / power);
  return W;
}

CMat update_w(const SystemInstance& inst, const CVec& theta, const CVec& beta,
              const RVec& alpha_tilde, const PowerBisectionOpts& opts) {
  const auto h = combined_channel(inst, theta);
  return update_w(h, beta, alpha_tilde, inst.P_T, opts);
}

CVec update_epsilon(const LinkTerms& lt, const CVec& theta, const RVec& alpha_tilde,
                    double sigma2) {
  const int K = lt.users();
  CVec eps(K);
  for (int k = 0; k < K; ++k) {
    const CVec r = lt.received(theta, k);
    eps(k) = std::sqrt(alpha_tilde(k)) * r(k) / (r.squaredNorm() + sigma2);
  }
  return eps;
}

double f3(const LinkTerms& lt, const CVec& theta, const RVec& alpha_tilde, double sigma2) {
  double value = 0.0;
  for (int k = 0; k < lt.users(); ++k) {
    const CVec r = lt.received(theta, k);
    value += alpha_tilde(k) * std::norm(r(k)) / (r.squaredNorm() + sigma2);
  }
  return value;
}

double f3a(const LinkTerms& lt, const CVec& theta, const CVec& epsilon, const RVec& alpha_tilde,
           double sigma2) {
  double value = 0.0;
  for (int k = 0; k < lt.users(); ++k) {
    const CVec r = lt.received(theta, k);
    value += 2.0 * std::sqrt(alpha_tilde(k)) * std::real(std::conj(epsilon(k)) * r(k)) -
             std::norm(epsilon(k)) * (r.squaredNorm() + sigma2);
  }
  return value;
}

}  // namespace irsbeam
