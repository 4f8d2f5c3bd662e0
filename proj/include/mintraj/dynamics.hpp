#pragma once

#include "mintraj/smoothing.hpp"
#include "mintraj/types.hpp"

namespace mintraj {

/// Augmented state-costate vector field with the smoothed extremal control substituted.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual Vec14 rhs(const Vec14& z) const = 0;
  virtual Mat14 rhs_jacobian(const Vec14& z) const = 0;
  virtual void rhs_and_jacobian(const Vec14& z, Vec14& dz, Mat14& jac) const {
    dz = rhs(z);
    jac = rhs_jacobian(z);
  }
  virtual ControlEval control(const Vec14& z) const = 0;
  virtual double hamiltonian(const Vec14& z) const = 0;

  /// Inertial (or rotating-frame, for CR3BP) position and velocity of the state part.
  virtual void position_velocity(const Vec14& z, Vec3& r, Vec3& v) const = 0;
  /// Thrust unit vector expressed in the same Cartesian frame.
  virtual Vec3 thrust_direction(const Vec14& z) const = 0;
};

}  // namespace mintraj
