// SPDX-License-Identifier: Apache-2.0
#include "irsbeam/fp_transforms.hpp"
#include "irsbeam/model.hpp"
#include "irsbeam/qcqp.hpp"

#include "doctest.h"
#include "test_support.hpp"

#include <Eigen/Eigenvalues>

using namespace irsbeam;
using irsbeam::testing::random_cmat;
using irsbeam::testing::random_cvec;
using irsbeam::testing::random_instance;

TEST_CASE("link_terms reproduce the reflected received amplitudes") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(rng, 2, 2, 3);
    const CMat W = random_cmat(rng, 2, 2);
    const LinkTerms lt = link_terms(inst, W);
    const CVec theta = random_cvec(rng, 3);
    const auto h = combined_channel(inst, theta);
    for (int k = 0; k < 2; ++k) {
      for (int i = 0; i < 2; ++i) {
        const cdouble direct = (h[k].adjoint() * W.col(i))(0);
        const cdouble via_terms = lt.b(i, k) + (theta.adjoint() * lt.a_ik(i, k))(0);
        CHECK(std::abs(std::norm(direct) - std::norm(via_terms)) <=
              1e-12 * (1.0 + std::norm(direct)));
      }
    }
  }
}

TEST_CASE("link_terms degenerate cases") {
  std::mt19937_64 rng(22);
  auto inst = random_instance(rng, 3, 2, 4);
  const CMat W = random_cmat(rng, 3, 2);
  inst.G.setZero();
  const LinkTerms lt = link_terms(inst, W);
  for (int k = 0; k < 2; ++k) {
    CHECK(lt.a[k].norm() == 0.0);
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(lt.b(i, k) - (inst.h_d[k].adjoint() * W.col(i))(0)) < 1e-15);
    }
  }
  const LinkTerms zero = link_terms(random_instance(rng, 3, 2, 4), CMat::Zero(3, 2));
  CHECK(zero.b.norm() == 0.0);
  for (const auto& a : zero.a) CHECK(a.norm() == 0.0);
}

TEST_CASE("build_qcqp with zero epsilon is the zero problem") {
  std::mt19937_64 rng(23);
  const auto inst = random_instance(rng, 3, 3, 4);
  const LinkTerms lt = link_terms(inst, random_cmat(rng, 3, 3));
  const QcqpData q = build_qcqp(lt, CVec::Zero(3), RVec::Constant(3, 2.0), inst.sigma2);
  CHECK(q.U.norm() == 0.0);
  CHECK(q.nu.norm() == 0.0);
  CHECK(q.C == 0.0);
}

TEST_CASE("build_qcqp scalar expansion") {
  const cdouble a(0.4, -0.3), b(1.1, 0.2), eps(0.6, 0.25);
  const double at = 1.8, s2 = 0.4;
  LinkTerms lt;
  lt.a = {CMat::Constant(1, 1, a)};
  lt.b = CMat::Constant(1, 1, b);
  const QcqpData q = build_qcqp(lt, CVec::Constant(1, eps), RVec::Constant(1, at), s2);
  CHECK(std::abs(q.U(0, 0) - std::norm(eps) * std::norm(a)) < 1e-15);
  const cdouble nu = std::sqrt(at) * std::conj(eps) * a - std::norm(eps) * std::conj(b) * a;
  CHECK(std::abs(q.nu(0) - nu) < 1e-15);
  const double C = 2.0 * std::sqrt(at) * (std::conj(eps) * b).real() -
                   std::norm(eps) * (s2 + std::norm(b));
  CHECK(q.C == doctest::Approx(C).epsilon(1e-14));
}

TEST_CASE("f4 equals f3a at the epsilon it was built from") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(rng, 4, 4, 8);
    const LinkTerms lt = link_terms(inst, random_cmat(rng, 4, 4, 0.5));
    const RVec at = RVec::Random(4).array() + 2.0;
    const CVec theta0 = testing::random_phases(rng, 8);
    const CVec eps = update_epsilon(lt, theta0, at, inst.sigma2);
    const QcqpData q = build_qcqp(lt, eps, at, inst.sigma2);
    for (int s = 0; s < 10; ++s) {
      const CVec theta = random_cvec(rng, 8);
      const double ref = f3a(lt, theta, eps, at, inst.sigma2);
      CHECK(f4(q, theta) == doctest::Approx(ref).epsilon(1e-10));
    }
    // The chain closes at the point where epsilon was optimal.
    CHECK(f4(q, theta0) == doctest::Approx(f3(lt, theta0, at, inst.sigma2)).epsilon(1e-10));
  }
}

TEST_CASE("built U is Hermitian and positive semidefinite") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 50; ++t) {
    const auto inst = random_instance(rng, 4, 4, 10);
    const LinkTerms lt = link_terms(inst, random_cmat(rng, 4, 4));
    const QcqpData q = build_qcqp(lt, random_cvec(rng, 4), RVec::Constant(4, 3.0), inst.sigma2);
    CHECK((q.U - q.U.adjoint()).norm() == 0.0);
    const RVec ev = Eigen::SelfAdjointEigenSolver<CMat>(q.U).eigenvalues();
    CHECK(ev.minCoeff() >= -1e-10 * ev.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("check_qcqp rejects non-Hermitian and indefinite matrices") {
  QcqpData q;
  q.U = CMat::Identity(2, 2);
  q.nu = CVec::Zero(2);
  CHECK_NOTHROW(check_qcqp(q));
  q.U(0, 1) = cdouble(0.0, 0.5);
  CHECK_THROWS_AS(check_qcqp(q), InternalConsistencyError);
  q.U = CMat::Identity(2, 2);
  q.U(1, 1) = -0.5;
  CHECK_THROWS_AS(check_qcqp(q), InternalConsistencyError);
}

TEST_CASE("f4 closed-form values") {
  std::mt19937_64 rng(26);
  QcqpData q = testing::random_qcqp(rng, 6);
  q.C = 1.25;
  CHECK(f4(q, CVec::Zero(6)) == q.C);
  const CVec star = q.U.ldlt().solve(q.nu);
  const double peak = (q.nu.adjoint() * star)(0).real() + q.C;
  CHECK(f4(q, star) == doctest::Approx(peak).epsilon(1e-11));
  CHECK(f4_grad(q, star).norm() < 1e-9 * q.nu.norm());
  for (int s = 0; s < 20; ++s) {
    CHECK(f4(q, star + 0.1 * random_cvec(rng, 6)) < peak);
  }
}

TEST_CASE("f4_grad matches central differences") {
  std::mt19937_64 rng(27);
  for (int t = 0; t < 100; ++t) {
    const int N = 2 + t % 9;
    const QcqpData q = testing::random_qcqp(rng, N, 3);
    const CVec theta = random_cvec(rng, N);
    const CVec g = f4_grad(q, theta);
    auto f = [&](const CVec& x) { return f4(q, x); };
    for (int n = 0; n < N; ++n) {
      CVec e = CVec::Zero(N);
      e(n) = 1.0;
      const double d_re = testing::central_difference(f, theta, e, 1e-5);
      const double d_im = testing::central_difference(f, theta, cdouble(0, 1) * e, 1e-5);
      const double scale = std::max(1.0, 2.0 * std::abs(g(n)));
      CHECK(std::abs(d_re - 2.0 * g(n).real()) <= 1e-6 * scale);
      CHECK(std::abs(d_im - 2.0 * g(n).imag()) <= 1e-6 * scale);
    }
  }
}

TEST_CASE("f4 is concave along random segments") {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 200; ++t) {
    const QcqpData q = testing::random_qcqp(rng, 5, 2);
    const CVec a = random_cvec(rng, 5), b = random_cvec(rng, 5);
    const double s = (t % 11) / 10.0;
    CHECK(f4(q, s * a + (1 - s) * b) >= s * f4(q, a) + (1 - s) * f4(q, b) - 1e-10);
  }
}
