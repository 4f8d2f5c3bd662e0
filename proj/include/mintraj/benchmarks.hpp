#pragma once

#include <string_view>

#include "mintraj/shooting.hpp"

namespace mintraj {

enum class BenchmarkId { EarthToMars, EarthToDionysus };

std::string_view to_string(BenchmarkId id);  // "e2m" / "e2d"
BenchmarkId parse_benchmark(std::string_view name);

/// Physical mission data in km, km/s, kg, s, N.
struct BenchmarkData {
  BenchmarkId id = BenchmarkId::EarthToMars;
  double m0 = 0.0;
  double isp = 0.0;
  double t_max = 0.0;
  double tof_days = 0.0;
  Vec3 r0 = Vec3::Zero();
  Vec3 v0 = Vec3::Zero();
  Vec3 rf = Vec3::Zero();
  Vec3 vf = Vec3::Zero();
  int mee_revolutions = 0;  // extra revolutions on the MEE longitude target
};

const BenchmarkData& benchmark_data(BenchmarkId id);

/// Nondimensionalized problem. Cartesian uses the heliocentric scale, MEE the mu = 1 scale
/// with 1 AU length unit; both take m0 as the mass unit.
ShootingProblem load_benchmark(BenchmarkId id, Coordinates coords,
                               SmoothingKind smoothing = SmoothingKind::HyperbolicTangent,
                               bool use_stm = true);

struct TerminalError {
  double position_km = 0.0;
  double velocity_kms = 0.0;
};

/// Redimensionalized Cartesian miss distance of a terminal augmented state.
TerminalError terminal_error(const ShootingProblem& problem, const Vec14& zf);

}  // namespace mintraj
