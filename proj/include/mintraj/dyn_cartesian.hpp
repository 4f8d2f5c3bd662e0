#pragma once

#include "mintraj/dynamics.hpp"

namespace mintraj {

struct CartesianAugState {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double m = 1.0;
  Vec3 lam_r = Vec3::Zero();
  Vec3 lam_v = Vec3::Zero();
  double lam_m = 0.0;

  Vec14 pack() const;
  static CartesianAugState unpack(const Vec14& z);
};

// Two-body Cartesian formulation. All inputs in canonical units.
ControlEval cartesian_control(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);
Vec14 cartesian_rhs(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);
/// Analytic Jacobian of cartesian_rhs. Throws std::domain_error on the singular set.
Mat14 cartesian_rhs_jacobian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);
double cartesian_hamiltonian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);

class CartesianDynamics final : public Dynamics {
 public:
  CartesianDynamics(const ThrustModel& model, const SmoothingConfig& cfg) : model_(model), cfg_(cfg) {}

  Vec14 rhs(const Vec14& z) const override { return cartesian_rhs(z, model_, cfg_); }
  Mat14 rhs_jacobian(const Vec14& z) const override {
    return cartesian_rhs_jacobian(z, model_, cfg_);
  }
  ControlEval control(const Vec14& z) const override { return cartesian_control(z, model_, cfg_); }
  double hamiltonian(const Vec14& z) const override {
    return cartesian_hamiltonian(z, model_, cfg_);
  }
  void position_velocity(const Vec14& z, Vec3& r, Vec3& v) const override {
    r = z.segment<3>(0);
    v = z.segment<3>(3);
  }
  Vec3 thrust_direction(const Vec14& z) const override { return control(z).alpha_hat; }

 private:
  ThrustModel model_;
  SmoothingConfig cfg_;
};

}  // namespace mintraj
