// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "irsbeam/harness.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace irsbeam {

/// Bad configuration file or value. The message names the file or key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a YAML document with optional top-level sections
///
///   scenario:  M K N L_I irs_y cluster_x cluster_y cluster_radius P_T_dbm
///              noise_psd_dbm_hz bandwidth_hz ref_loss_db rho_D rho_I xi_db
///              eta omega
///   sweep:     P_T_dbm N xi_db L_I            (lists)
///   methods:   feasible_sets rc_solvers baselines{no_irs random_theta}
///   trials:    snapshots realizations master_seed jobs record_timing
///   optimizer: max_outer_iter rel_tol npp_inner max_inner_iter inner_tol
///              ellipsoid_tol ellipsoid_max_iter admm_mu power_tol
///              power_max_iter max_consecutive_rejections monotone_slack
///
/// Omitted keys keep the BenchConfig defaults; unknown keys are rejected.
BenchConfig parse_config(std::string_view yaml);

/// parse_config on a file; a missing or unreadable file is a ConfigError
/// whose message contains the path.
BenchConfig load_config(const std::string& path);

/// The defaults as a commented YAML document accepted by parse_config.
std::string default_config_yaml();

}  // namespace irsbeam
