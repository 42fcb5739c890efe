// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/types.hpp"

#include <cstdint>
#include <vector>

namespace irsbeam {

/// Femtocell geometry and link budget. BS at the origin, IRS at (L_I, irs_y),
/// users uniform in a disk. Defaults reproduce the reference scenario.
struct ScenarioConfig {
  int M = 4;
  int K = 4;
  int N = 10;
  double L_I = 100.0;  ///< m
  double irs_y = 50.0;  ///< m
  double cluster_x = 200.0;
  double cluster_y = 0.0;
  double cluster_radius = 10.0;

  double P_T_dbm = 0.0;
  double noise_psd_dbm_hz = -170.0;
  double bandwidth_hz = 2e5;
  double ref_loss_db = -30.0;  ///< path loss at 1 m
  double rho_D = 3.5;
  double rho_I = 2.0;
  double xi_db = 10.0;  ///< relative reflection gain
  double eta = 0.8;
  std::vector<double> omega;  ///< empty means all ones

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  bool operator==(const ScenarioConfig&) const = default;
};

struct RngSeedPolicy {
  std::uint64_t master_seed = 0;
  std::uint32_t snapshot_index = 0;
  std::uint32_t realization_index = 0;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

double distance(Point a, Point b);

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_mw(double dbm);

/// Linear power gain of the BS -> user link. Distances below 1 m are clamped.
double path_loss_direct(double d, const ScenarioConfig& cfg);

/// Linear power gain of the cascaded BS -> IRS -> user link.
double path_loss_irs(double d_G, double d_r, const ScenarioConfig& cfg);

/// Receiver noise power in mW.
double noise_power(const ScenarioConfig& cfg);

/// User positions for one snapshot; depends only on (master, snapshot).
std::vector<Point> user_positions(const ScenarioConfig& cfg, const RngSeedPolicy& seeds);

/// One channel realization: positions from the snapshot substream, Rayleigh
/// fades from the realization substream.
SystemInstance gen_instance(const ScenarioConfig& cfg, const RngSeedPolicy& seeds);

}  // namespace irsbeam
