// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/channel_sim.hpp"

#include "irsbeam/rng.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <string>

namespace irsbeam {

namespace {

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("scenario.") + field + ": " + what);
}

double clamp_distance(double d) {
  if (d < 1.0) {
    std::cerr << "warning: link distance " << d << " m clamped to 1 m\n";
    return 1.0;
  }
  return d;
}

}  // namespace

void ScenarioConfig::validate() const {
  require(M > 0, "M", "must be positive");
  require(K > 0, "K", "must be positive");
  require(N >= 0, "N", "must be nonnegative");
  require(cluster_radius > 0.0, "cluster_radius", "must be positive");
  require(bandwidth_hz > 0.0, "bandwidth_hz", "must be positive");
  require(rho_D >= 2.0, "rho_D", "must be at least 2");
  require(rho_I >= 2.0, "rho_I", "must be at least 2");
  require(eta > 0.0 && eta <= 1.0, "eta", "must lie in (0, 1]");
  require(omega.empty() || static_cast<int>(omega.size()) == K, "omega", "must hold K weights");
  for (double w : omega) require(w > 0.0, "omega", "weights must be positive");
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_mw(double dbm) { return db_to_linear(dbm); }

double path_loss_direct(double d, const ScenarioConfig& cfg) {
  return db_to_linear(cfg.ref_loss_db) * std::pow(clamp_distance(d), -cfg.rho_D);
}

double path_loss_irs(double d_G, double d_r, const ScenarioConfig& cfg) {
  const double ref = db_to_linear(cfg.ref_loss_db);
  const double xi = db_to_linear(cfg.xi_db);
  return ref * ref * xi * xi * std::pow(clamp_distance(d_G) * clamp_distance(d_r), -cfg.rho_I);
}

double noise_power(const ScenarioConfig& cfg) {
  if (!(cfg.bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  return dbm_to_mw(cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz));
}

std::vector<Point> user_positions(const ScenarioConfig& cfg, const RngSeedPolicy& seeds) {
  CounterRng rng(seeds.master_seed, static_cast<std::uint32_t>(Stream::UserPositions),
                 seeds.snapshot_index, 0);
  std::vector<Point> users(cfg.K);
  for (auto& p : users) {
    const double r = cfg.cluster_radius * std::sqrt(rng.uniform());
    const double phi = 2.0 * std::numbers::pi * rng.uniform();
    p = {cfg.cluster_x + r * std::cos(phi), cfg.cluster_y + r * std::sin(phi)};
  }
  return users;
}

SystemInstance gen_instance(const ScenarioConfig& cfg, const RngSeedPolicy& seeds) {
  cfg.validate();
  const Point bs{0.0, 0.0};
  const Point irs{cfg.L_I, cfg.irs_y};
  const auto users = user_positions(cfg, seeds);

  CounterRng fade(seeds.master_seed, static_cast<std::uint32_t>(Stream::SmallScaleFading),
                  seeds.snapshot_index, seeds.realization_index);

  SystemInstance inst;
  inst.M = cfg.M;
  inst.K = cfg.K;
  inst.N = cfg.N;
  inst.P_T = dbm_to_mw(cfg.P_T_dbm);
  inst.sigma2 = noise_power(cfg);
  inst.eta = cfg.eta;
  inst.omega = cfg.omega.empty() ? std::vector<double>(cfg.K, 1.0) : cfg.omega;

  for (int k = 0; k < cfg.K; ++k) {
    const double amp = std::sqrt(path_loss_direct(distance(bs, users[k]), cfg));
    CVec h(cfg.M);
    for (int m = 0; m < cfg.M; ++m) h(m) = amp * fade.complex_normal();
    inst.h_d.push_back(std::move(h));
  }

  // The cascaded gain ref^2 xi^2 (d_G d_r)^-rho_I splits evenly into the two hops.
  const double hop_gain = db_to_linear(cfg.ref_loss_db) * db_to_linear(cfg.xi_db);
  const double amp_G = std::sqrt(hop_gain * std::pow(clamp_distance(distance(bs, irs)), -cfg.rho_I));
  inst.G.resize(cfg.N, cfg.M);
  for (int m = 0; m < cfg.M; ++m) {
    for (int n = 0; n < cfg.N; ++n) inst.G(n, m) = amp_G * fade.complex_normal();
  }
  if (cfg.N > 0) {
    for (int k = 0; k < cfg.K; ++k) {
      const double amp =
          std::sqrt(hop_gain * std::pow(clamp_distance(distance(irs, users[k])), -cfg.rho_I));
      CVec h(cfg.N);
      for (int n = 0; n < cfg.N; ++n) h(n) = amp * fade.complex_normal();
      inst.h_r.push_back(std::move(h));
    }
  }
  inst.validate();
  return inst;
}

}  // namespace irsbeam
