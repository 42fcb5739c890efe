// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/config.hpp"

#include "doctest.h"

using namespace irsbeam;

namespace {

std::string error_of(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("the documented defaults parse to the built-in defaults") {
  CHECK(parse_config(default_config_yaml()) == BenchConfig{});
  CHECK(parse_config("") == BenchConfig{});
}

TEST_CASE("file values override defaults") {
  const auto cfg = parse_config(R"(
scenario:
  N: 20
  xi_db: 5
  omega: [1, 2, 1, 2]
sweep:
  P_T_dbm: [-5, 0, 5]
  L_I: 50
methods:
  feasible_sets: [ideal, discrete:4]
  rc_solvers: [admm, npp]
  baselines: {random_theta: false}
trials:
  snapshots: 3
  master_seed: 18446744073709551615
optimizer:
  npp_inner: ldd
  admm_mu: 4.5
  max_outer_iter: 50
)");
  CHECK(cfg.scenario.N == 20);
  CHECK(cfg.scenario.xi_db == 5.0);
  CHECK(cfg.scenario.M == 4);
  CHECK(cfg.scenario.omega == std::vector<double>{1, 2, 1, 2});
  CHECK(cfg.P_T_dbm == std::vector<double>{-5, 0, 5});
  CHECK(cfg.L_I == std::vector<double>{50});
  CHECK(cfg.feasible_sets == std::vector<FeasibleSet>{FeasibleSet::ideal(), FeasibleSet::discrete(4)});
  CHECK(cfg.rc_solvers == std::vector<RcSolver>{RcSolver::Admm, RcSolver::Npp});
  CHECK(cfg.baseline_no_irs);
  CHECK_FALSE(cfg.baseline_random_theta);
  CHECK(cfg.snapshots == 3);
  CHECK(cfg.realizations == 10);
  CHECK(cfg.master_seed == 18446744073709551615ULL);
  CHECK(cfg.optimizer.npp_inner == ConvexSolver::Ldd);
  CHECK(cfg.optimizer.inner_opts.admm_mu_override == 4.5);
  CHECK(cfg.optimizer.max_outer_iter == 50);
}

TEST_CASE("errors name the offending key") {
  CHECK(error_of("scenario:\n  bogus: 1\n").find("scenario.bogus") != std::string::npos);
  CHECK(error_of("extra: 1\n").find("'extra'") != std::string::npos);
  CHECK(error_of("methods:\n  baselines:\n    none: true\n").find("methods.baselines.none") !=
        std::string::npos);
  CHECK(error_of("scenario:\n  M: four\n").find("scenario.M") != std::string::npos);
  CHECK(error_of("scenario:\n  rho_D: 1.0\n").find("scenario.rho_D") != std::string::npos);
  CHECK(error_of("trials:\n  snapshots: 0\n").find("trials.snapshots") != std::string::npos);
  CHECK(error_of("methods:\n  feasible_sets: [discrete:1]\n").find("methods.feasible_sets") !=
        std::string::npos);
  CHECK(error_of("methods:\n  rc_solvers: [sdr]\n").find("methods.rc_solvers") != std::string::npos);
  CHECK(error_of("sweep:\n  N: [1, x]\n").find("sweep.N[1]") != std::string::npos);
  CHECK(error_of("scenario: [1, 2]\n").find("scenario") != std::string::npos);
  CHECK_FALSE(error_of("scenario: {M: 2\n").empty());
}

TEST_CASE("missing file error contains the path") {
  try {
    load_config("/no/such/dir/bench.yaml");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("/no/such/dir/bench.yaml") != std::string::npos);
  }
}
