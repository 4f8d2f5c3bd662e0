#pragma once

#include <Eigen/Dense>

namespace mintraj {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Vec7 = Eigen::Matrix<double, 7, 1>;
using Vec14 = Eigen::Matrix<double, 14, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat7 = Eigen::Matrix<double, 7, 7>;
using Mat14 = Eigen::Matrix<double, 14, 14>;
using Mat7x14 = Eigen::Matrix<double, 7, 14>;
using Mat14x7 = Eigen::Matrix<double, 14, 7>;

// Layout of the augmented state-costate vector shared by every backend:
//   z = [x(6), m, lambda(6), lambda_m]
// where x is either Cartesian (r, v) or the equinoctial set (p, f, g, h, k, L).
namespace slot {
inline constexpr int kState = 0;
inline constexpr int kMass = 6;
inline constexpr int kCostate = 7;
inline constexpr int kMassCostate = 13;
inline constexpr int kDim = 14;
}  // namespace slot

/// Thruster and gravity constants already expressed in canonical units.
struct ThrustModel {
  double mu = 1.0;     // LU^3/TU^2
  double t_max = 0.0;  // MU LU/TU^2
  double c = 1.0;      // LU/TU
};

/// Extremal control at one instant.
struct ControlEval {
  Vec3 alpha_hat = Vec3::UnitX();
  double delta = 0.0;
  double S = 0.0;
  // Primer magnitude fell below the singularity floor; alpha_hat is the fallback axis.
  bool degenerate = false;
};

/// Primer magnitudes below this are treated as the singular set.
inline constexpr double kPrimerFloor = 1e-12;

}  // namespace mintraj
