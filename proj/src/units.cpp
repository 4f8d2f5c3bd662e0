#include "mintraj/units.hpp"

#include <cmath>
#include <stdexcept>

namespace mintraj {

void CanonicalScale::validate() const {
  if (!(length_unit > 0.0) || !(time_unit > 0.0) || !(mass_unit > 0.0)) {
    throw std::invalid_argument("canonical scale units must be positive");
  }
}

SpacecraftParams SpacecraftParams::make(double m0, double isp, double t_max, double mu_body) {
  SpacecraftParams p;
  p.m0 = m0;
  p.isp = isp;
  p.t_max = t_max;
  p.c = isp * kStandardGravity;
  p.mu_body = mu_body;
  p.validate();
  return p;
}

void SpacecraftParams::validate() const {
  if (!(m0 > 0.0) || !(isp > 0.0) || !(t_max >= 0.0) || !(c > 0.0)) {
    throw std::invalid_argument("spacecraft parameters out of range");
  }
}

double canonical_mu(double mu_body, double length_unit, double time_unit) {
  return mu_body * time_unit * time_unit / (length_unit * length_unit * length_unit);
}

CanonicalScale make_heliocentric_scale(double mass_unit, double mu_body) {
  CanonicalScale s;
  s.length_unit = kAstronomicalUnit;
  s.time_unit = kHeliocentricTimeUnit;
  s.mass_unit = mass_unit;
  s.mu_canonical = canonical_mu(mu_body, s.length_unit, s.time_unit);
  s.validate();
  return s;
}

CanonicalScale make_mu_one_scale(double mu_body, double length_unit, double mass_unit) {
  if (!(mu_body > 0.0) || !(length_unit > 0.0)) {
    throw std::invalid_argument("mu-one scale needs positive mu and length unit");
  }
  CanonicalScale s;
  s.length_unit = length_unit;
  s.time_unit = std::sqrt(length_unit * length_unit * length_unit / mu_body);
  s.mass_unit = mass_unit;
  s.mu_canonical = 1.0;
  s.validate();
  return s;
}

CartesianState nondimensionalize(const CartesianState& physical, const CanonicalScale& scale) {
  return {physical.r / scale.length_unit, physical.v / scale.velocity_unit(),
          physical.m / scale.mass_unit};
}

CartesianState redimensionalize(const CartesianState& canonical, const CanonicalScale& scale) {
  return {canonical.r * scale.length_unit, canonical.v * scale.velocity_unit(),
          canonical.m * scale.mass_unit};
}

ThrustModel to_canonical(const SpacecraftParams& params, const CanonicalScale& scale) {
  params.validate();
  scale.validate();
  ThrustModel model;
  model.mu = scale.mu_canonical;
  // N -> kg km/s^2 before scaling.
  model.t_max = params.t_max * 1e-3 / (scale.mass_unit * scale.acceleration_unit());
  model.c = params.c / scale.velocity_unit();
  return model;
}

}  // namespace mintraj
