// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/channel_sim.hpp"
#include "irsbeam/rng.hpp"

#include "doctest.h"

#include <set>

using namespace irsbeam;

namespace {

double db(double linear) { return linear_to_db(linear); }

}  // namespace

TEST_CASE("Philox4x32-10 known-answer vectors") {
  using Block = std::array<std::uint32_t, 4>;
  CHECK(CounterRng::block({0, 0, 0, 0}, {0, 0}) ==
        Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(CounterRng::block({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}) ==
        Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(CounterRng::block({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}) ==
        Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("counter streams are reproducible and distinct") {
  CounterRng a(5, 1, 2, 3), b(5, 1, 2, 3), c(5, 1, 2, 4), d(6, 1, 2, 3);
  for (int i = 0; i < 10; ++i) {
    const auto x = a();
    CHECK(x == b());
    (void)c();
    (void)d();
  }
  CounterRng a2(5, 1, 2, 3), c2(5, 1, 2, 4), d2(6, 1, 2, 3);
  CHECK(a2() != c2());
  CHECK(a2() != d2());

  std::set<std::uint64_t> seeds;
  for (std::uint32_t s = 0; s < 30; ++s) {
    for (std::uint32_t r = 0; r < 30; ++r) {
      for (auto st : {Stream::InitialTheta, Stream::RandomTheta}) seeds.insert(derive_seed(1, s, r, st));
    }
  }
  CHECK(seeds.size() == 30 * 30 * 2);
}

TEST_CASE("uniform and complex normal moments") {
  CounterRng rng(42, 9, 0, 0);
  const int n = 100000;
  double mean_u = 0.0, power = 0.0, var_re = 0.0, var_im = 0.0, mean_re = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    mean_u += u;
  }
  for (int i = 0; i < n; ++i) {
    const cdouble g = rng.complex_normal();
    power += std::norm(g);
    var_re += g.real() * g.real();
    var_im += g.imag() * g.imag();
    mean_re += g.real();
  }
  CHECK(mean_u / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(power / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(var_re / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(var_im / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(mean_re / n) < 0.01);
}

TEST_CASE("path loss anchors") {
  ScenarioConfig cfg;
  CHECK(db(path_loss_direct(1.0, cfg)) == doctest::Approx(-30.0).epsilon(1e-12));
  CHECK(std::abs(db(path_loss_direct(200.0, cfg)) - (-30.0 - 35.0 * std::log10(200.0))) < 1e-10);
  CHECK(std::abs(db(path_loss_direct(200.0, cfg)) - (-110.53)) < 0.01);

  ScenarioConfig sq = cfg;
  sq.rho_D = 2.0;
  CHECK(std::abs(db(path_loss_direct(10.0, sq)) - (-50.0)) < 1e-10);

  const double d = std::hypot(100.0, 50.0);
  CHECK(std::abs(db(path_loss_irs(d, d, cfg)) - (2 * -30.0 + 2 * 10.0 - 20.0 * std::log10(12500.0))) <
        1e-10);
  CHECK(std::abs(db(path_loss_irs(d, d, cfg)) - (-121.94)) < 0.01);

  ScenarioConfig flat = cfg;
  flat.xi_db = 0.0;
  CHECK(std::abs(db(path_loss_irs(1.0, 1.0, flat)) - (-60.0)) < 1e-10);
  CHECK(std::abs(db(path_loss_irs(20.0, 7.0, cfg)) - db(path_loss_irs(40.0, 7.0, cfg)) -
                 20.0 * std::log10(2.0)) < 1e-10);
}

TEST_CASE("distances below one meter are clamped") {
  ScenarioConfig cfg;
  CHECK(path_loss_direct(0.25, cfg) == path_loss_direct(1.0, cfg));
  CHECK(path_loss_irs(0.5, 0.1, cfg) == path_loss_irs(1.0, 1.0, cfg));
}

TEST_CASE("noise power") {
  ScenarioConfig cfg;
  CHECK(std::abs(db(noise_power(cfg)) - (-170.0 + 10.0 * std::log10(2e5))) < 1e-10);
  CHECK(std::abs(db(noise_power(cfg)) - (-116.9897)) < 1e-4);
  cfg.bandwidth_hz = 1.0;
  CHECK(std::abs(db(noise_power(cfg)) - (-170.0)) < 1e-10);
  cfg.noise_psd_dbm_hz = -160.0;
  cfg.bandwidth_hz = 10.0;
  CHECK(std::abs(db(noise_power(cfg)) - (-150.0)) < 1e-10);
  cfg.bandwidth_hz = 0.0;
  CHECK_THROWS(noise_power(cfg));
}

TEST_CASE("gen_instance is deterministic and seeds separate positions from fades") {
  ScenarioConfig cfg;
  const auto a = gen_instance(cfg, {3, 1, 2});
  const auto b = gen_instance(cfg, {3, 1, 2});
  CHECK(a.G == b.G);
  for (int k = 0; k < cfg.K; ++k) {
    CHECK(a.h_d[k] == b.h_d[k]);
    CHECK(a.h_r[k] == b.h_r[k]);
  }
  CHECK(a.sigma2 == b.sigma2);

  const auto pos = user_positions(cfg, {3, 1, 2});
  const auto same_snapshot = user_positions(cfg, {3, 1, 7});
  const auto other_snapshot = user_positions(cfg, {3, 2, 2});
  for (int k = 0; k < cfg.K; ++k) {
    CHECK(pos[k].x == same_snapshot[k].x);
    CHECK(pos[k].y == same_snapshot[k].y);
    CHECK(pos[k].x != other_snapshot[k].x);
  }
  const auto other_fade = gen_instance(cfg, {3, 1, 7});
  CHECK(other_fade.h_d[0] != a.h_d[0]);
  CHECK(gen_instance(cfg, {4, 1, 2}).h_d[0] != a.h_d[0]);
}

TEST_CASE("gen_instance fills the link budget") {
  ScenarioConfig cfg;
  cfg.P_T_dbm = 10.0;
  const auto inst = gen_instance(cfg, {1, 0, 0});
  CHECK(inst.P_T == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(inst.eta == 0.8);
  CHECK(inst.omega == std::vector<double>(4, 1.0));
  CHECK(inst.G.rows() == 10);
  CHECK(inst.G.cols() == 4);

  cfg.N = 0;
  const auto bare = gen_instance(cfg, {1, 0, 0});
  CHECK(bare.G.size() == 0);
  CHECK(bare.h_r.empty());
  CHECK_NOTHROW(bare.validate());
}

TEST_CASE("direct-link power matches the path loss on average") {
  ScenarioConfig cfg;
  const RngSeedPolicy snap{11, 4, 0};
  const auto users = user_positions(cfg, snap);
  const int trials = 10000;
  std::vector<double> mean(cfg.K, 0.0);
  for (int r = 0; r < trials; ++r) {
    const auto inst = gen_instance(cfg, {11, 4, static_cast<std::uint32_t>(r)});
    for (int k = 0; k < cfg.K; ++k) mean[k] += inst.h_d[k].squaredNorm() / cfg.M / trials;
  }
  for (int k = 0; k < cfg.K; ++k) {
    const double expect = path_loss_direct(distance({0, 0}, users[k]), cfg);
    CHECK(mean[k] == doctest::Approx(expect).epsilon(0.03));
  }
}

TEST_CASE("users are uniform over the cluster disk") {
  ScenarioConfig cfg;
  cfg.K = 100000;
  const auto users = user_positions(cfg, {5, 0, 0});
  double msd = 0.0;
  for (const auto& p : users) {
    const double d = distance(p, {cfg.cluster_x, cfg.cluster_y});
    CHECK(d <= cfg.cluster_radius);
    msd += d * d;
  }
  CHECK(msd / users.size() == doctest::Approx(50.0).epsilon(0.05));
}

TEST_CASE("scenario validation names the field") {
  auto expect_field = [](ScenarioConfig cfg, const std::string& field) {
    try {
      cfg.validate();
      FAIL("expected rejection of " << field);
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("scenario." + field) != std::string::npos);
    }
  };
  ScenarioConfig c;
  c.rho_D = 1.5;
  expect_field(c, "rho_D");
  c = {};
  c.bandwidth_hz = -1.0;
  expect_field(c, "bandwidth_hz");
  c = {};
  c.omega = {1.0, 2.0};
  expect_field(c, "omega");
  c = {};
  c.eta = 0.0;
  expect_field(c, "eta");
  c = {};
  c.cluster_radius = 0.0;
  expect_field(c, "cluster_radius");
}

TEST_CASE("unit conversions") {
  CHECK(dbm_to_mw(0.0) == 1.0);
  CHECK(dbm_to_mw(30.0) == doctest::Approx(1000.0));
  CHECK(db_to_linear(-3.0) == doctest::Approx(0.501187).epsilon(1e-5));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}
