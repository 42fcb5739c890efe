// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/types.hpp"

#include <span>
#include <vector>

namespace irsbeam {

/// h_k = h_{d,k} + G^H * sqrt(eta) * diag(theta) * h_{r,k} for every user.
std::vector<CVec> combined_channel(const SystemInstance& inst, const CVec& theta);

/// Per-user SINR given precomputed combined channels.
RVec sinr(std::span<const CVec> h, const CMat& W, double sigma2);
RVec sinr(const SystemInstance& inst, const CMat& W, const CVec& theta);

/// Weighted sum rate in bits/s/Hz.
double wsr(std::span<const double> omega, const RVec& gamma);
double wsr(const SystemInstance& inst, const CMat& W, const CVec& theta);

double total_power(const CMat& W);

/// Euclidean projection of a single reflection coefficient onto F.
cdouble project(cdouble z, const FeasibleSet& F);
CVec project(const CVec& theta, const FeasibleSet& F);

/// Index of the nearest phase level in {0, 2pi/tau, ...} by circular
/// distance. Ties (and z == 0) go to the smallest phase.
int discrete_level(cdouble z, int levels);

/// e^{j 2 pi index / levels}; index 0 is exactly 1 + 0j.
cdouble level_point(int index, int levels);

/// Circular distance between two angles, in [0, pi].
double circular_distance(double a, double b);

/// Membership check with kProjTol-style tolerance. Discrete sets also
/// require the phase to sit on the grid.
bool in_feasible_set(cdouble z, const FeasibleSet& F, double tol = kProjTol);
bool in_feasible_set(const CVec& theta, const FeasibleSet& F, double tol = kProjTol);

/// Checks the BeamformerState invariants against inst and F.
void check_state(const SystemInstance& inst, const BeamformerState& state,
                 const FeasibleSet& F);

}  // namespace irsbeam
