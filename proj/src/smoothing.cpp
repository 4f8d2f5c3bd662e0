#include "mintraj/smoothing.hpp"

#include <cmath>
#include <stdexcept>

namespace mintraj {

namespace {

// Beyond this |S/rho| the tanh law is saturated to exactly 0 or 1.
constexpr double kTanhSaturation = 40.0;

}  // namespace

void SmoothingConfig::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument("smoothing parameter rho must be positive");
  }
}

double throttle(double S, const SmoothingConfig& cfg) {
  switch (cfg.kind) {
    case SmoothingKind::HyperbolicTangent: {
      const double x = S / cfg.rho;
      if (x > kTanhSaturation) return 1.0;
      if (x < -kTanhSaturation) return 0.0;
      return 0.5 * (1.0 + std::tanh(x));
    }
    case SmoothingKind::L2Norm:
      return 0.5 * (1.0 + S / std::hypot(S, cfg.rho));
  }
  return 0.0;
}

double throttle_derivative(double S, const SmoothingConfig& cfg) {
  switch (cfg.kind) {
    case SmoothingKind::HyperbolicTangent: {
      // sech^2(x) = 4 e^{-2|x|} / (1 + e^{-2|x|})^2, finite for any x.
      const double e = std::exp(-2.0 * std::abs(S / cfg.rho));
      const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
      return 0.5 / cfg.rho * sech2;
    }
    case SmoothingKind::L2Norm: {
      const double n = std::hypot(S, cfg.rho);
      return 0.5 * (cfg.rho / n) * (cfg.rho / n) / n;
    }
  }
  return 0.0;
}

double hard_throttle(double S) { return S >= 0.0 ? 1.0 : 0.0; }

std::string_view to_string(SmoothingKind kind) {
  return kind == SmoothingKind::HyperbolicTangent ? "tanh" : "l2";
}

SmoothingKind parse_smoothing(std::string_view name) {
  if (name == "tanh") return SmoothingKind::HyperbolicTangent;
  if (name == "l2") return SmoothingKind::L2Norm;
  throw std::invalid_argument("unknown smoothing '" + std::string(name) + "' (expected tanh|l2)");
}

}  // namespace mintraj
