#include "mintraj/monte_carlo.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace mintraj {

Vec7 sample_costates(Coordinates coords, std::uint64_t seed, int index) {
  if (index < 0) throw std::invalid_argument("trial index must be nonnegative");
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  Vec7 u;
  // 53 random bits to a double in [0, 1); independent of the standard library's
  // distribution implementation.
  for (int i = 0; i < 7; ++i) u[i] = static_cast<double>(rng() >> 11) * 0x1.0p-53;

  Vec7 eta = u;
  if (coords == Coordinates::Mee) eta.head<6>() *= 0.1;
  return eta;
}

std::vector<MonteCarloCell> default_cells() {
  std::vector<MonteCarloCell> out;
  for (const Coordinates c : {Coordinates::Cartesian, Coordinates::Mee}) {
    for (const SmoothingKind k : {SmoothingKind::HyperbolicTangent, SmoothingKind::L2Norm}) {
      out.push_back({k, c, true});
      out.push_back({k, c, false});
    }
  }
  return out;
}

int CellReport::converged_count() const {
  int n = 0;
  for (const auto& t : trials) n += t.converged ? 1 : 0;
  return n;
}

double CellReport::convergence_percent() const {
  if (trials.empty()) return 0.0;
  return 100.0 * converged_count() / static_cast<double>(trials.size());
}

double CellReport::mean_time_all() const {
  if (trials.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (const auto& t : trials) s += t.wall_time;
  return s / static_cast<double>(trials.size());
}

double CellReport::mean_time_converged() const {
  double s = 0.0;
  int n = 0;
  for (const auto& t : trials) {
    if (t.converged) {
      s += t.wall_time;
      ++n;
    }
  }
  return n ? s / n : std::numeric_limits<double>::quiet_NaN();
}

TrialResult run_trial(BenchmarkId id, const MonteCarloCell& cell, std::uint64_t seed, int index,
                      const MonteCarloOptions& opt) {
  TrialResult tr;
  tr.index = index;
  tr.eta0_guess = sample_costates(cell.coords, seed, index);
  tr.eta0 = tr.eta0_guess;
  try {
    ShootingProblem problem = load_benchmark(id, cell.coords, cell.smoothing, cell.use_stm);
    problem.integrator = opt.integrator;
    const SolveReport rep = solve_with_continuation(problem, tr.eta0_guess, opt.schedule, opt.root);
    tr.converged = rep.converged;
    tr.failed_stage = rep.failed_stage;
    tr.status = rep.stages.empty() ? RootStatus::NonFiniteResidual
                                   : rep.stages[rep.failed_stage < 0 ? rep.stages.size() - 1
                                                                     : rep.failed_stage]
                                         .status;
    tr.eta0 = rep.eta0;
    tr.final_mass_kg = rep.final_mass_kg;
    tr.residual_inf_norm = rep.residual_inf_norm;
    tr.wall_time = rep.wall_time;
    for (const auto& s : rep.stages) tr.iterations += s.iterations;
    if (tr.converged && opt.sample_points >= 2) {
      const auto samples =
          sample_solution(problem, rep.eta0, opt.schedule.rho_final, opt.sample_points);
      tr.revolutions = revolution_count(samples);
    }
  } catch (const std::exception&) {
    // A trial that blows up is a failed trial, not a failed harness.
    tr.converged = false;
    tr.status = RootStatus::NonFiniteResidual;
  }
  return tr;
}

int threads_from_env(int fallback) {
  const char* env = std::getenv("MINTRAJ_THREADS");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n <= 0 || n > 4096) return fallback;
  return static_cast<int>(n);
}

namespace {

MonteCarloReport empty_report(BenchmarkId id, int trials, std::uint64_t seed,
                              const std::vector<MonteCarloCell>& cells) {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (cells.empty()) throw std::invalid_argument("config matrix is empty");
  MonteCarloReport rep;
  rep.problem = id;
  rep.trials = trials;
  rep.seed = seed;
  rep.cells.resize(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    rep.cells[c].cell = cells[c];
    rep.cells[c].trials.resize(static_cast<std::size_t>(trials));
  }
  return rep;
}

}  // namespace

MonteCarloReport run_monte_carlo(BenchmarkId id, int trials, std::uint64_t seed,
                                 const std::vector<MonteCarloCell>& cells,
                                 const MonteCarloOptions& opt) {
  MonteCarloReport rep = empty_report(id, trials, seed, cells);
  int threads = opt.threads > 0 ? opt.threads : threads_from_env(omp_get_max_threads());
  const long total = static_cast<long>(cells.size()) * trials;
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (long task = 0; task < total; ++task) {
    const auto c = static_cast<std::size_t>(task / trials);
    const int t = static_cast<int>(task % trials);
    rep.cells[c].trials[static_cast<std::size_t>(t)] = run_trial(id, cells[c], seed, t, opt);
  }
  return rep;
}

MonteCarloReport run_monte_carlo_serial(BenchmarkId id, int trials, std::uint64_t seed,
                                        const std::vector<MonteCarloCell>& cells,
                                        const MonteCarloOptions& opt) {
  MonteCarloReport rep = empty_report(id, trials, seed, cells);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (int t = 0; t < trials; ++t) {
      rep.cells[c].trials[static_cast<std::size_t>(t)] = run_trial(id, cells[c], seed, t, opt);
    }
  }
  return rep;
}

}  // namespace mintraj
