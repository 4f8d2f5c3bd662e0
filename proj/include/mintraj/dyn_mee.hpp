#pragma once

#include "mintraj/dynamics.hpp"

namespace mintraj {

struct MeeElements {
  double p = 1.0;
  double f = 0.0;
  double g = 0.0;
  double h = 0.0;
  double k = 0.0;
  double L = 0.0;

  Vec6 to_vector() const;
  static MeeElements from_vector(const Vec6& x);
};

struct ClassicalElements {
  double a = 1.0;
  double e = 0.0;
  double i = 0.0;     // inclination
  double raan = 0.0;  // right ascension of the ascending node
  double argp = 0.0;  // argument of periapsis
  double nu = 0.0;    // true anomaly
};

/// Throws std::invalid_argument for i = pi or a(1 - e^2) <= 0.
MeeElements coe_to_mee(const ClassicalElements& coe);
ClassicalElements cartesian_to_coe(const Vec3& r, const Vec3& v, double mu);
/// Throws std::invalid_argument for rectilinear orbits. L is returned in (-pi, pi].
MeeElements cartesian_to_mee(const Vec3& r, const Vec3& v, double mu);
void mee_to_cartesian(const MeeElements& mee, double mu, Vec3& r, Vec3& v);

/// Columns: radial, transverse, orbit-normal unit vectors.
Mat3 rtn_basis(const Vec3& r, const Vec3& v);

// Control-affine pieces with mu = 1: x-dot = A + B a_thrust.
Vec6 mee_a_vector(const Vec6& x);
Eigen::Matrix<double, 6, 3> mee_b_matrix(const Vec6& x);

// Augmented MEE formulation. Requires mu == 1 in `model`.
ControlEval mee_control(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);
Vec14 mee_rhs(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);
Mat14 mee_rhs_jacobian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);
void mee_rhs_and_jacobian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg,
                          Vec14& dz, Mat14& jac);
double mee_hamiltonian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg);

class MeeDynamics final : public Dynamics {
 public:
  MeeDynamics(const ThrustModel& model, const SmoothingConfig& cfg);

  Vec14 rhs(const Vec14& z) const override { return mee_rhs(z, model_, cfg_); }
  Mat14 rhs_jacobian(const Vec14& z) const override { return mee_rhs_jacobian(z, model_, cfg_); }
  void rhs_and_jacobian(const Vec14& z, Vec14& dz, Mat14& jac) const override {
    mee_rhs_and_jacobian(z, model_, cfg_, dz, jac);
  }
  ControlEval control(const Vec14& z) const override { return mee_control(z, model_, cfg_); }
  double hamiltonian(const Vec14& z) const override { return mee_hamiltonian(z, model_, cfg_); }
  void position_velocity(const Vec14& z, Vec3& r, Vec3& v) const override;
  Vec3 thrust_direction(const Vec14& z) const override;

 private:
  ThrustModel model_;
  SmoothingConfig cfg_;
};

}  // namespace mintraj
