#pragma once

#include <memory>
#include <string>
#include <vector>

#include "mintraj/dynamics.hpp"
#include "mintraj/integrator.hpp"
#include "mintraj/root_solver.hpp"
#include "mintraj/smoothing.hpp"
#include "mintraj/units.hpp"

namespace mintraj {

enum class Coordinates { Cartesian, Mee, Cr3bp };

std::string_view to_string(Coordinates c);
Coordinates parse_coordinates(std::string_view name);

/// Single-shooting setup. State vectors are canonical: (r, v) for Cartesian and CR3BP,
/// (p, f, g, h, k, L) for MEE. `target` for MEE carries L in any branch; the residual
/// aims at the branch reached after `n_rev` extra revolutions.
struct ShootingProblem {
  std::string name;
  Coordinates coords = Coordinates::Cartesian;
  SpacecraftParams params;
  CanonicalScale scale;
  ThrustModel model;
  Vec6 initial_state = Vec6::Zero();
  double initial_mass = 1.0;  // canonical
  Vec6 target = Vec6::Zero();
  int n_rev = 0;
  double tof = 0.0;  // TU
  double mu_ratio = 0.0;  // CR3BP only
  SmoothingConfig smoothing;
  bool use_stm = true;
  IntegratorConfig integrator;

  void validate() const;
};

std::unique_ptr<Dynamics> make_dynamics(const ShootingProblem& problem, double rho);

/// Final true longitude the MEE residual aims at.
double target_longitude(const ShootingProblem& problem);

Vec14 initial_augmented_state(const ShootingProblem& problem, const Vec7& eta0);

/// Terminal constraint violations [x(tf) - target; lambda_m(tf)]. Non-finite entries
/// mean the trajectory could not be propagated.
Vec7 residual(const ShootingProblem& problem, const Vec7& eta0, double rho);

/// d(residual)/d(eta0) from the state transition matrix. Non-finite on failure.
Mat7 residual_jacobian(const ShootingProblem& problem, const Vec7& eta0, double rho);

/// Terminal augmented state; ok is false when propagation failed.
struct TerminalState {
  Vec14 z = Vec14::Zero();
  bool ok = false;
  std::string message;
};
TerminalState propagate_to_final(const ShootingProblem& problem, const Vec7& eta0, double rho);

struct ContinuationSchedule {
  double rho_init = 1.0;
  double rho_factor = 0.1;
  double rho_final = 1e-5;

  void validate() const;
  /// rho_init, rho_init * factor, ... ending exactly at rho_final.
  std::vector<double> ladder() const;
};

struct StageReport {
  double rho = 0.0;
  RootStatus status = RootStatus::MaxIterations;
  int iterations = 0;
  int residual_evals = 0;
  int jacobian_evals = 0;
  double residual_norm = 0.0;
  double final_mass_kg = 0.0;
};

struct SolveReport {
  bool converged = false;
  int failed_stage = -1;  // index into stages, -1 when all converged
  Vec7 eta0_guess = Vec7::Zero();
  Vec7 eta0 = Vec7::Zero();  // last accepted solution
  double final_mass_kg = 0.0;
  double residual_inf_norm = 0.0;
  std::vector<StageReport> stages;
  double wall_time = 0.0;  // s
};

/// Runs solve_root along the rho ladder, warm-starting each stage. The Jacobian comes from
/// the STM when problem.use_stm is set and from central differences otherwise.
SolveReport solve_with_continuation(const ShootingProblem& problem, const Vec7& eta0,
                                    const ContinuationSchedule& schedule,
                                    const RootSolveConfig& root_cfg);

struct SamplePoint {
  double t = 0.0;
  Vec14 z = Vec14::Zero();
  Vec3 r = Vec3::Zero();  // Cartesian position in the problem frame
  Vec3 v = Vec3::Zero();
  Vec3 thrust_dir = Vec3::UnitX();
  double H = 0.0;
  double S = 0.0;
  double delta = 0.0;
};

/// Dense-output samples at n_points uniform times over [0, tof]. Throws std::runtime_error
/// if the trajectory cannot be propagated.
std::vector<SamplePoint> sample_solution(const ShootingProblem& problem, const Vec7& eta0, double rho,
                                         int n_points);

/// Complete revolutions about the origin accumulated along the samples.
int revolution_count(const std::vector<SamplePoint>& samples);

}  // namespace mintraj
