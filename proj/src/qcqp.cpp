// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/qcqp.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace irsbeam {

CVec LinkTerms::received(const CVec& theta, int k) const {
  // b_{i,k} + theta^H a_{i,k} for all i
  CVec out = b.col(k);
  if (theta.size() > 0) out += (theta.adjoint() * a[k]).transpose();
  return out;
}

LinkTerms link_terms(const SystemInstance& inst, const CMat& W) {
  if (W.rows() != inst.M || W.cols() != inst.K) throw InvalidInstance("W must be M x K");
  LinkTerms lt;
  lt.b.resize(inst.K, inst.K);
  for (int k = 0; k < inst.K; ++k) lt.b.col(k) = (inst.h_d[k].adjoint() * W).transpose();

  lt.a.reserve(inst.K);
  if (inst.N == 0) {
    for (int k = 0; k < inst.K; ++k) lt.a.emplace_back(CMat::Zero(0, inst.K));
    return lt;
  }
  const CMat GW = inst.G * W;
  const double amp = std::sqrt(inst.eta);
  for (int k = 0; k < inst.K; ++k) {
    lt.a.emplace_back(amp * (inst.h_r[k].conjugate().asDiagonal() * GW));
  }
  return lt;
}

QcqpData build_qcqp(const LinkTerms& lt, const CVec& epsilon, const RVec& alpha_tilde,
                    double sigma2) {
  const int K = lt.users();
  const int N = lt.elements();
  QcqpData q;
  q.U = CMat::Zero(N, N);
  q.nu = CVec::Zero(N);
  q.C = 0.0;
  for (int k = 0; k < K; ++k) {
    const cdouble eps = epsilon(k);
    const double eps2 = std::norm(eps);
    const double root = std::sqrt(alpha_tilde(k));
    if (N > 0) {
      q.U.noalias() += eps2 * (lt.a[k] * lt.a[k].adjoint());
      q.nu += root * std::conj(eps) * lt.a[k].col(k);
      q.nu.noalias() -= eps2 * (lt.a[k] * lt.b.col(k).conjugate());
    }
    q.C += 2.0 * root * std::real(std::conj(eps) * lt.b(k, k)) -
           eps2 * (sigma2 + lt.b.col(k).squaredNorm());
  }
  q.U = (0.5 * (q.U + q.U.adjoint())).eval();
  check_qcqp(q);
  return q;
}

double f4(const QcqpData& q, const CVec& theta) {
  if (theta.size() != q.size()) throw InvalidInstance("theta length must match QCQP size");
  if (theta.size() == 0) return q.C;
  const double quad = std::real(theta.dot(q.U * theta));
  const double lin = std::real(theta.dot(q.nu));
  return -quad + 2.0 * lin + q.C;
}

CVec f4_grad(const QcqpData& q, const CVec& theta) {
  if (theta.size() != q.size()) throw InvalidInstance("theta length must match QCQP size");
  return q.nu - q.U * theta;
}

void check_qcqp(const QcqpData& q) {
  const int N = q.size();
  if (q.U.rows() != N || q.U.cols() != N) throw InvalidInstance("U must be N x N");
  if (N == 0) return;
  const double scale = q.U.cwiseAbs().maxCoeff();
  const double asym = (q.U - q.U.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(1.0, scale)) {
    throw InternalConsistencyError("U is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMat> eig(q.U, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double norm2 = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (lo < -1e-10 * norm2) {
    std::ostringstream msg;
    msg << "U is not positive semidefinite (min eigenvalue " << lo << ")";
    throw InternalConsistencyError(msg.str());
  }
}

}  // namespace irsbeam
