#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "mintraj/monte_carlo.hpp"

namespace mintraj {

/// Everything needed to rebuild a benchmark solve from a saved solution.
struct SolutionRecord {
  BenchmarkId problem = BenchmarkId::EarthToMars;
  Coordinates coords = Coordinates::Cartesian;
  SmoothingKind smoothing = SmoothingKind::HyperbolicTangent;
  bool use_stm = true;
  std::uint64_t seed = 0;
  int trial = 0;
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  double residual_tol = 1e-9;
  int n_rev = 0;
  ContinuationSchedule schedule;
  SolveReport report;
};

nlohmann::json to_json(const SolutionRecord& rec, bool include_timing);
SolutionRecord solution_from_json(const nlohmann::json& j);

/// Formats with 17 significant digits.
std::string format_double(double x);

/// One row per cell, in cell order.
std::string monte_carlo_csv(const MonteCarloReport& rep, bool include_timing);
/// One row per (cell, trial).
std::string monte_carlo_trials_csv(const MonteCarloReport& rep, bool include_timing);
nlohmann::json to_json(const MonteCarloReport& rep, bool include_timing);
/// Human-readable table for the terminal.
std::string monte_carlo_table(const MonteCarloReport& rep);

/// Header: t,x,y,z,vx,vy,vz,m,lam1..lam6,lam_m,alpha_x,alpha_y,alpha_z,H,S,delta.
std::string samples_csv(const std::vector<SamplePoint>& samples);

}  // namespace mintraj
