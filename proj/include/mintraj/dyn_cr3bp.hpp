#pragma once

#include <array>

#include "mintraj/dynamics.hpp"

namespace mintraj {

/// Earth-Moon secondary-to-total mass ratio.
inline constexpr double kEarthMoonMassRatio = 0.012150585609624;

// Rotating-frame circular restricted three-body model; primaries at (-mu, 0, 0) and (1 - mu, 0, 0).

/// Gravity plus centrifugal acceleration g(r). Throws std::domain_error at either primary.
Vec3 gravity_rotating(const Vec3& r, double mu_ratio);
/// Coriolis term [2 vy, -2 vx, 0].
Vec3 coriolis(const Vec3& v);
/// dg/dr, the (symmetric) Hessian of the effective potential.
Mat3 gravity_gradient(const Vec3& r, double mu_ratio);
/// dh/dv, constant.
Mat3 coriolis_matrix();

/// Effective potential U = (x^2 + y^2)/2 + (1 - mu)/r1 + mu/r2.
double effective_potential(const Vec3& r, double mu_ratio);
/// C = 2U - |v|^2, conserved on ballistic arcs.
double jacobi_constant(const Vec3& r, const Vec3& v, double mu_ratio);

/// L1..L5 in order. Throws std::runtime_error if a collinear root cannot be bracketed.
std::array<Vec3, 5> libration_points(double mu_ratio);

ControlEval cr3bp_switching(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);
Vec14 cr3bp_rhs(const Vec14& z, double mu_ratio, const ThrustModel& model, const SmoothingConfig& cfg);
Mat14 cr3bp_rhs_jacobian(const Vec14& z, double mu_ratio, const ThrustModel& model,
                         const SmoothingConfig& cfg);
double cr3bp_hamiltonian(const Vec14& z, double mu_ratio, const ThrustModel& model,
                         const SmoothingConfig& cfg);

class Cr3bpDynamics final : public Dynamics {
 public:
  Cr3bpDynamics(double mu_ratio, const ThrustModel& model, const SmoothingConfig& cfg);

  Vec14 rhs(const Vec14& z) const override { return cr3bp_rhs(z, mu_ratio_, model_, cfg_); }
  Mat14 rhs_jacobian(const Vec14& z) const override {
    return cr3bp_rhs_jacobian(z, mu_ratio_, model_, cfg_);
  }
  ControlEval control(const Vec14& z) const override { return cr3bp_switching(z, model_, cfg_); }
  double hamiltonian(const Vec14& z) const override {
    return cr3bp_hamiltonian(z, mu_ratio_, model_, cfg_);
  }
  void position_velocity(const Vec14& z, Vec3& r, Vec3& v) const override {
    r = z.segment<3>(0);
    v = z.segment<3>(3);
  }
  Vec3 thrust_direction(const Vec14& z) const override { return control(z).alpha_hat; }

 private:
  double mu_ratio_;
  ThrustModel model_;
  SmoothingConfig cfg_;
};

}  // namespace mintraj
