#include "mintraj/dyn_cartesian.hpp"

#include <cmath>
#include <stdexcept>

namespace mintraj {

Vec14 CartesianAugState::pack() const {
  Vec14 z;
  z << r, v, m, lam_r, lam_v, lam_m;
  return z;
}

CartesianAugState CartesianAugState::unpack(const Vec14& z) {
  CartesianAugState s;
  s.r = z.segment<3>(0);
  s.v = z.segment<3>(3);
  s.m = z[6];
  s.lam_r = z.segment<3>(7);
  s.lam_v = z.segment<3>(10);
  s.lam_m = z[13];
  return s;
}

ControlEval cartesian_control(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  const Vec3 lam_v = z.segment<3>(10);
  const double m = z[6];
  const double lv = lam_v.norm();
  ControlEval out;
  if (lv < kPrimerFloor) {
    out.alpha_hat = Vec3::UnitX();
    out.degenerate = true;
  } else {
    out.alpha_hat = -lam_v / lv;
  }
  out.S = model.c * lv / m + z[13] - 1.0;
  out.delta = throttle(out.S, cfg);
  return out;
}

Vec14 cartesian_rhs(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  const Vec3 r = z.segment<3>(0);
  const double m = z[6];
  const Vec3 lam_v = z.segment<3>(10);
  const double rn = r.norm();
  if (rn == 0.0) throw std::domain_error("cartesian_rhs: position at the central body");

  const ControlEval u = cartesian_control(z, model, cfg);
  const double mu = model.mu;
  const double r3 = rn * rn * rn;
  const double r5 = r3 * rn * rn;

  Vec14 dz;
  dz.segment<3>(0) = z.segment<3>(3);
  dz.segment<3>(3) = -mu / r3 * r + (model.t_max / m * u.delta) * u.alpha_hat;
  dz[6] = -model.t_max / model.c * u.delta;
  dz.segment<3>(7) = mu / r3 * lam_v - (3.0 * mu * r.dot(lam_v) / r5) * r;
  dz.segment<3>(10) = -z.segment<3>(7);
  dz[13] = -model.t_max / (m * m) * lam_v.norm() * u.delta;
  return dz;
}

Mat14 cartesian_rhs_jacobian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  const Vec3 r = z.segment<3>(0);
  const double m = z[6];
  const Vec3 lam_v = z.segment<3>(10);
  const double lv = lam_v.norm();
  const double rn = r.norm();
  if (rn == 0.0) throw std::domain_error("cartesian_rhs_jacobian: position at the central body");
  if (lv < kPrimerFloor) {
    throw std::domain_error("cartesian_rhs_jacobian: velocity costate on the singular set");
  }

  const double mu = model.mu;
  const double T = model.t_max;
  const double c = model.c;
  const double S = c * lv / m + z[13] - 1.0;
  const double d = throttle(S, cfg);
  const double dp = throttle_derivative(S, cfg);

  const double r2 = rn * rn;
  const double r3 = r2 * rn;
  const double r5 = r3 * r2;
  const double r7 = r5 * r2;
  const double rl = r.dot(lam_v);
  const Mat3 I = Mat3::Identity();
  const Mat3 rrT = r * r.transpose();
  const Mat3 llT = lam_v * lam_v.transpose();

  Mat14 J = Mat14::Zero();
  // r-dot
  J.block<3, 3>(0, 3) = I;
  // v-dot
  J.block<3, 3>(3, 0) = 3.0 * mu / r5 * rrT - mu / r3 * I;
  J.block<3, 1>(3, 6) = (T / (m * m * lv) * d + T * c / (m * m * m) * dp) * lam_v;
  J.block<3, 3>(3, 10) = T / (m * lv * lv * lv) * d * llT - T / (m * lv) * d * I -
                         T * c / (m * lv * m * lv) * dp * llT;
  J.block<3, 1>(3, 13) = -T / (m * lv) * dp * lam_v;
  // m-dot
  J(6, 6) = T / (m * m) * lv * dp;
  J.block<1, 3>(6, 10) = -T / (m * lv) * dp * lam_v.transpose();
  J(6, 13) = -T / c * dp;
  // lambda_r-dot
  J.block<3, 3>(7, 0) = -3.0 * mu / r5 * (lam_v * r.transpose() + r * lam_v.transpose() + rl * I) +
                        15.0 * mu * rl / r7 * rrT;
  J.block<3, 3>(7, 10) = mu / r3 * I - 3.0 * mu / r5 * rrT;
  // lambda_v-dot
  J.block<3, 3>(10, 7) = -I;
  // lambda_m-dot
  J(13, 6) = 2.0 * T / (m * m * m) * lv * d + T * c / (m * m * m * m) * lv * lv * dp;
  J.block<1, 3>(13, 10) =
      (-T / (m * m * lv) * d - T * c / (m * m * m) * dp) * lam_v.transpose();
  J(13, 13) = -T / (m * m) * lv * dp;
  return J;
}

double cartesian_hamiltonian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  const Vec3 r = z.segment<3>(0);
  const Vec3 v = z.segment<3>(3);
  const double m = z[6];
  const Vec3 lam_r = z.segment<3>(7);
  const Vec3 lam_v = z.segment<3>(10);
  const double lam_m = z[13];
  const double rn = r.norm();
  const ControlEval u = cartesian_control(z, model, cfg);

  const Vec3 f_v = -model.mu / (rn * rn * rn) * r + (model.t_max / m * u.delta) * u.alpha_hat;
  const double f_m = -model.t_max / model.c * u.delta;
  return model.t_max / model.c * u.delta + lam_r.dot(v) + lam_v.dot(f_v) + lam_m * f_m;
}

}  // namespace mintraj
