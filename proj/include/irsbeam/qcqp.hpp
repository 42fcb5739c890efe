// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/types.hpp"

#include <vector>

namespace irsbeam {

/// Per-link terms of the reflected channel for a fixed W.
///
/// a_{i,k} = sqrt(eta) diag(h_{r,k}^H) G w_i  (column i of a[k], N x K)
/// b_{i,k} = h_{d,k}^H w_i                    (entry b(i, k))
///
/// so that |(h_{d,k}^H + h_{r,k}^H Theta^H G) w_i|^2 = |b_{i,k} + theta^H a_{i,k}|^2.
struct LinkTerms {
  std::vector<CMat> a;
  CMat b;

  int users() const { return static_cast<int>(b.cols()); }
  int elements() const { return a.empty() ? 0 : static_cast<int>(a.front().rows()); }
  auto a_ik(int i, int k) const { return a[k].col(i); }

  /// b_{i,k} + theta^H a_{i,k} for all i, at fixed k.
  CVec received(const CVec& theta, int k) const;
};

/// Concave quadratic f4(theta) = -theta^H U theta + 2 Re{theta^H nu} + C.
struct QcqpData {
  CMat U;
  CVec nu;
  double C = 0.0;

  int size() const { return static_cast<int>(nu.size()); }
};

LinkTerms link_terms(const SystemInstance& inst, const CMat& W);

/// Assembles U, nu and C for fixed epsilon; U is symmetrized and checked PSD.
QcqpData build_qcqp(const LinkTerms& lt, const CVec& epsilon, const RVec& alpha_tilde,
                    double sigma2);

double f4(const QcqpData& q, const CVec& theta);

/// d f4 / d conj(theta) = -U theta + nu. The real-coordinate gradient is
/// 2 Re(g) along Re(theta) and 2 Im(g) along Im(theta).
CVec f4_grad(const QcqpData& q, const CVec& theta);

/// Throws InternalConsistencyError unless U is Hermitian (1e-12) and PSD.
void check_qcqp(const QcqpData& q);

}  // namespace irsbeam
