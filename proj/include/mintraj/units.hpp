#pragma once

#include "mintraj/types.hpp"

namespace mintraj {

/// Standard gravity in km/s^2; c = isp * g0.
inline constexpr double kStandardGravity = 9.80665e-3;
inline constexpr double kMuSun = 132712440018.0;  // km^3/s^2
inline constexpr double kAstronomicalUnit = 1.496e8;  // km
inline constexpr double kHeliocentricTimeUnit = 3.1536e7;  // s
inline constexpr double kSecondsPerDay = 86400.0;

struct CanonicalScale {
  double length_unit = 1.0;  // km per LU
  double time_unit = 1.0;    // s per TU
  double mass_unit = 1.0;    // kg per MU
  double mu_canonical = 1.0;

  double velocity_unit() const { return length_unit / time_unit; }
  double acceleration_unit() const { return length_unit / (time_unit * time_unit); }
  void validate() const;
};

struct SpacecraftParams {
  double m0 = 1.0;       // kg
  double isp = 1.0;      // s
  double t_max = 0.0;    // N
  double c = kStandardGravity;  // km/s
  double mu_body = kMuSun;      // km^3/s^2

  static SpacecraftParams make(double m0, double isp, double t_max, double mu_body);
  void validate() const;
};

/// Heliocentric scale: AU, 3.1536e7 s, mass in units of `mass_unit`.
CanonicalScale make_heliocentric_scale(double mass_unit = 1.0, double mu_body = kMuSun);

/// Scale that makes the gravitational parameter exactly one.
CanonicalScale make_mu_one_scale(double mu_body, double length_unit, double mass_unit = 1.0);

double canonical_mu(double mu_body, double length_unit, double time_unit);

struct CartesianState {
  Vec3 r = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  double m = 1.0;
};

CartesianState nondimensionalize(const CartesianState& physical, const CanonicalScale& scale);
CartesianState redimensionalize(const CartesianState& canonical, const CanonicalScale& scale);

ThrustModel to_canonical(const SpacecraftParams& params, const CanonicalScale& scale);

}  // namespace mintraj
