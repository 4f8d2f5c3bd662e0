#pragma once

#include <cstdint>
#include <vector>

#include "mintraj/benchmarks.hpp"

namespace mintraj {

/// Uniform costate guess for trial `index` of `seed`. Cartesian and CR3BP draw every entry
/// from [0, 1]; MEE draws the element costates from [0, 0.1] and lambda_m from [0, 1].
/// All coordinate sets consume the same underlying uniforms for a given (seed, index).
Vec7 sample_costates(Coordinates coords, std::uint64_t seed, int index);

struct MonteCarloCell {
  SmoothingKind smoothing = SmoothingKind::HyperbolicTangent;
  Coordinates coords = Coordinates::Cartesian;
  bool use_stm = true;
};

/// tanh/Cartesian, L2/Cartesian, tanh/MEE, L2/MEE, each with STM on then off.
std::vector<MonteCarloCell> default_cells();

struct MonteCarloOptions {
  ContinuationSchedule schedule;
  RootSolveConfig root;
  IntegratorConfig integrator;
  int threads = 0;          // 0: MINTRAJ_THREADS or the OpenMP default
  int sample_points = 4000; // for revolution counting of converged trials
};

struct TrialResult {
  int index = 0;
  bool converged = false;
  int failed_stage = -1;
  RootStatus status = RootStatus::MaxIterations;
  Vec7 eta0_guess = Vec7::Zero();
  Vec7 eta0 = Vec7::Zero();
  double final_mass_kg = 0.0;
  double residual_inf_norm = 0.0;
  int revolutions = -1;  // -1 when not converged
  int iterations = 0;    // summed over stages
  double wall_time = 0.0;
};

struct CellReport {
  MonteCarloCell cell;
  std::vector<TrialResult> trials;

  int converged_count() const;
  double convergence_percent() const;
  double mean_time_all() const;
  double mean_time_converged() const;  // NaN when nothing converged
};

struct MonteCarloReport {
  BenchmarkId problem = BenchmarkId::EarthToMars;
  int trials = 0;
  std::uint64_t seed = 0;
  std::vector<CellReport> cells;
};

/// Solves one seeded trial of one cell.
TrialResult run_trial(BenchmarkId id, const MonteCarloCell& cell, std::uint64_t seed, int index,
                      const MonteCarloOptions& opt);

/// Thread count from MINTRAJ_THREADS, falling back to `fallback` when unset or invalid.
int threads_from_env(int fallback);

/// Parallel over all (cell, trial) pairs; results are ordered by cell then trial index.
MonteCarloReport run_monte_carlo(BenchmarkId id, int trials, std::uint64_t seed,
                                 const std::vector<MonteCarloCell>& cells,
                                 const MonteCarloOptions& opt);

/// Single-threaded reference with identical output.
MonteCarloReport run_monte_carlo_serial(BenchmarkId id, int trials, std::uint64_t seed,
                                        const std::vector<MonteCarloCell>& cells,
                                        const MonteCarloOptions& opt);

}  // namespace mintraj
