#include "doctest.h"

#include <cmath>

#include "mintraj/dyn_cartesian.hpp"
#include "mintraj/stm.hpp"
#include "support.hpp"

using namespace mintraj;
using mintraj::testing::max_rel_error;
using mintraj::testing::uniform;

namespace {

ThrustModel e2m_like_model() { return {39.42122061296821, 3.323928128342246, 4.134525593582888}; }

Vec14 random_aug_state() {
  CartesianAugState s;
  s.r = mintraj::testing::random_direction() * uniform(0.5, 2.0);
  s.v = mintraj::testing::random_vec3(-1.0, 1.0) * 6.0;
  s.m = uniform(0.3, 1.0);
  s.lam_r = mintraj::testing::random_vec3(-1.0, 1.0);
  do {
    s.lam_v = mintraj::testing::random_vec3(-1.0, 1.0);
  } while (s.lam_v.norm() < 0.1);
  s.lam_m = uniform(-0.5, 1.0);
  return s.pack();
}

SmoothingConfig random_smoothing(int i) {
  return {i % 2 == 0 ? SmoothingKind::HyperbolicTangent : SmoothingKind::L2Norm, uniform(0.05, 1.0)};
}

/// Hamiltonian with throttle and direction held at the values of a reference state.
double frozen_hamiltonian(const Vec14& z, const ThrustModel& model, double delta, const Vec3& alpha) {
  const Vec3 r = z.segment<3>(0);
  const Vec3 v = z.segment<3>(3);
  const double m = z[6];
  const Vec3 g = -model.mu / std::pow(r.norm(), 3) * r;
  const double T = model.t_max;
  return T * delta / model.c + z.segment<3>(7).dot(v) +
         z.segment<3>(10).dot(g + T * delta / m * alpha) - z[13] * T * delta / model.c;
}

}  // namespace

TEST_CASE("control examples") {
  ThrustModel model{1.0, 1.0, 2.0};
  CartesianAugState s;
  s.r = {1.0, 0.0, 0.0};
  s.m = 1.0;
  s.lam_v = {0.0, 0.0, -1.0};
  ControlEval u = cartesian_control(s.pack(), model, {SmoothingKind::L2Norm, 1.0});
  CHECK((u.alpha_hat - Vec3(0.0, 0.0, 1.0)).norm() < 1e-15);
  CHECK(u.S == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hard_throttle(u.S) == 1.0);
  CHECK_FALSE(u.degenerate);

  model.c = 1.0;
  s.lam_v = {1e-4, 0.0, 0.0};
  u = cartesian_control(s.pack(), model, {SmoothingKind::L2Norm, 1.0});
  CHECK(u.S == doctest::Approx(-0.9999).epsilon(1e-14));
  CHECK(hard_throttle(u.S) == 0.0);
}

TEST_CASE("degenerate primer falls back and flags") {
  CartesianAugState s;
  s.r = {1.0, 0.0, 0.0};
  const Vec14 z = s.pack();
  const ThrustModel model{1.0, 1.0, 1.0};
  const SmoothingConfig cfg{SmoothingKind::HyperbolicTangent, 1.0};
  const ControlEval u = cartesian_control(z, model, cfg);
  CHECK(u.degenerate);
  CHECK(u.alpha_hat == Vec3::UnitX());
  CHECK(u.S == -1.0);
  CHECK(cartesian_rhs(z, model, cfg).allFinite());
  CHECK_THROWS_AS(cartesian_rhs_jacobian(z, model, cfg), std::domain_error);
}

TEST_CASE("collision state rejected") {
  CartesianAugState s;
  s.r = Vec3::Zero();
  s.lam_v = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(cartesian_rhs(s.pack(), {1.0, 0.0, 1.0}, {}), std::domain_error);
}

TEST_CASE("ballistic rhs example") {
  CartesianAugState s;
  s.r = {1.0, 0.0, 0.0};
  s.v = {0.0, 1.0, 0.0};
  s.lam_v = {0.3, -0.2, 0.1};
  const Vec14 dz = cartesian_rhs(s.pack(), {1.0, 0.0, 1.0}, {});
  CHECK((dz.segment<3>(0) - Vec3(0.0, 1.0, 0.0)).norm() == 0.0);
  CHECK((dz.segment<3>(3) - Vec3(-1.0, 0.0, 0.0)).norm() < 1e-15);
  CHECK(dz[6] == 0.0);
  CHECK(dz[13] == 0.0);
}

TEST_CASE("hamiltonian vanishes on a coasting circular orbit with zero costates") {
  CartesianAugState s;
  s.r = {1.0, 0.0, 0.0};
  s.v = {0.0, 1.0, 0.0};
  CHECK(cartesian_hamiltonian(s.pack(), {1.0, 0.0, 1.0}, {}) == 0.0);
}

TEST_CASE("structural identities at random states") {
  const ThrustModel model = e2m_like_model();
  for (int i = 0; i < 100; ++i) {
    const Vec14 z = random_aug_state();
    const SmoothingConfig cfg = random_smoothing(i);
    const Vec14 dz = cartesian_rhs(z, model, cfg);
    CHECK((dz.segment<3>(10) + z.segment<3>(7)).norm() == 0.0);
    CHECK(dz[13] <= 0.0);
    const ControlEval u = cartesian_control(z, model, cfg);
    CHECK(std::abs(u.alpha_hat.norm() - 1.0) < 1e-12);

    // H = H0 - (T/c) S delta, where H0 is the coasting part.
    const Vec3 r = z.segment<3>(0);
    const double H0 = z.segment<3>(7).dot(z.segment<3>(3)) +
                      z.segment<3>(10).dot(-model.mu / std::pow(r.norm(), 3) * r);
    const double H = cartesian_hamiltonian(z, model, cfg);
    CHECK(std::abs(H - (H0 - model.t_max / model.c * u.S * u.delta)) <= 1e-12 * std::max(1.0, std::abs(H)));
  }
}

TEST_CASE("costate and state rates are the gradients of the frozen-control hamiltonian") {
  const ThrustModel model = e2m_like_model();
  for (int i = 0; i < 100; ++i) {
    const Vec14 z = random_aug_state();
    const SmoothingConfig cfg = random_smoothing(i);
    const ControlEval u = cartesian_control(z, model, cfg);
    const Vec14 grad = mintraj::testing::fd_gradient14(
        [&](const Vec14& w) { return frozen_hamiltonian(w, model, u.delta, u.alpha_hat); }, z);
    const Vec14 dz = cartesian_rhs(z, model, cfg);
    for (int j = 0; j < 7; ++j) {
      // dx/dt = dH/dlambda, dlambda/dt = -dH/dx.
      CHECK(std::abs(dz[j] - grad[7 + j]) <= 1e-8 * std::max(1.0, std::abs(dz[j])));
      CHECK(std::abs(dz[7 + j] + grad[j]) <= 1e-8 * std::max(1.0, std::abs(dz[7 + j])));
    }
  }
}

TEST_CASE("analytic jacobian matches central differences at 100 random states") {
  const ThrustModel model = e2m_like_model();
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec14 z = random_aug_state();
    const SmoothingConfig cfg = random_smoothing(i);
    const Mat14 J = cartesian_rhs_jacobian(z, model, cfg);
    const Mat14 Jfd = mintraj::testing::fd_jacobian14(
        [&](const Vec14& w) { return cartesian_rhs(w, model, cfg); }, z);
    const double err = max_rel_error(J, Jfd);
    worst = std::max(worst, err);
    CHECK(err < 5e-6);
    CHECK(J.block<3, 3>(0, 0).isZero(0.0));
    CHECK(J.block<3, 3>(0, 3) == Mat3::Identity());
  }
  MESSAGE("worst relative Jacobian error " << worst);
}

TEST_CASE("jacobian without thrust is the coasting gravity-gradient structure") {
  ThrustModel model = e2m_like_model();
  model.t_max = 0.0;
  for (int i = 0; i < 20; ++i) {
    const Vec14 z = random_aug_state();
    const Vec3 r = z.segment<3>(0);
    const double rn = r.norm();
    const Mat3 G = model.mu * (3.0 * r * r.transpose() / std::pow(rn, 5) - Mat3::Identity() / std::pow(rn, 3));
    Mat14 expected = Mat14::Zero();
    expected.block<3, 3>(0, 3) = Mat3::Identity();
    expected.block<3, 3>(3, 0) = G;
    expected.block<3, 3>(7, 10) = -G;
    expected.block<3, 3>(10, 7) = -Mat3::Identity();
    // d/dr of -(G lam_v): third derivatives of the potential.
    const Mat14 J = cartesian_rhs_jacobian(z, model, random_smoothing(i));
    expected.block<3, 3>(7, 0) = J.block<3, 3>(7, 0);
    CHECK(max_rel_error(J, expected) < 1e-13);
    const Mat14 Jfd = mintraj::testing::fd_jacobian14(
        [&](const Vec14& w) { return cartesian_rhs(w, model, {}); }, z);
    CHECK(max_rel_error(J.block<3, 3>(7, 0), Jfd.block<3, 3>(7, 0)) < 5e-6);
  }
}

TEST_CASE("coasting energy is conserved over one orbit") {
  const ThrustModel model{1.0, 0.0, 1.0};
  CartesianDynamics dyn(model, {});
  CartesianAugState s;
  s.r = {1.0, 0.0, 0.0};
  s.v = {0.0, 1.2, 0.1};
  const double energy0 = 0.5 * s.v.squaredNorm() - 1.0 / s.r.norm();
  const double a = -0.5 / energy0;
  const double period = 2.0 * M_PI * std::pow(a, 1.5);
  const auto res = propagate(dyn, s.pack(), 0.0, period, IntegratorConfig{});
  REQUIRE(res.ok());
  const Vec3 r = res.y.segment<3>(0);
  const Vec3 v = res.y.segment<3>(3);
  const double energy = 0.5 * v.squaredNorm() - 1.0 / r.norm();
  CHECK(std::abs(energy - energy0) < 1e-10);
  CHECK((r - s.r).norm() < 1e-9);
}

TEST_CASE("dynamics object forwards to the free functions") {
  const ThrustModel model = e2m_like_model();
  const SmoothingConfig cfg{SmoothingKind::L2Norm, 0.3};
  CartesianDynamics dyn(model, cfg);
  const Vec14 z = random_aug_state();
  CHECK(dyn.rhs(z) == cartesian_rhs(z, model, cfg));
  Vec14 dz;
  Mat14 J;
  dyn.rhs_and_jacobian(z, dz, J);
  CHECK(J == cartesian_rhs_jacobian(z, model, cfg));
  CHECK(dyn.hamiltonian(z) == cartesian_hamiltonian(z, model, cfg));
  CHECK(dyn.thrust_direction(z) == cartesian_control(z, model, cfg).alpha_hat);
  const CartesianAugState s = CartesianAugState::unpack(z);
  CHECK(s.pack() == z);
}
