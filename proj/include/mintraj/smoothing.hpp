#pragma once

#include <string>
#include <string_view>

namespace mintraj {

enum class SmoothingKind { HyperbolicTangent, L2Norm };

struct SmoothingConfig {
  SmoothingKind kind = SmoothingKind::HyperbolicTangent;
  double rho = 1.0;

  void validate() const;
};

/// Smoothed throttle in [0, 1]; 0.5 at S = 0, increasing in S.
double throttle(double S, const SmoothingConfig& cfg);

/// d(throttle)/dS; peaks at 0.5/rho for S = 0.
double throttle_derivative(double S, const SmoothingConfig& cfg);

/// Unsmoothed bang-bang law (rho -> 0 limit), with S = 0 mapped to full thrust.
double hard_throttle(double S);

std::string_view to_string(SmoothingKind kind);
SmoothingKind parse_smoothing(std::string_view name);

}  // namespace mintraj
