#include "mintraj/shooting.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mintraj/dyn_cartesian.hpp"
#include "mintraj/dyn_cr3bp.hpp"
#include "mintraj/dyn_mee.hpp"
#include "mintraj/stm.hpp"

namespace mintraj {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Rows of z(tf) that enter the residual; the unknowns occupy z[7..13].
constexpr int kResidualRows[7] = {0, 1, 2, 3, 4, 5, slot::kMassCostate};

Vec7 nan_vector() { return Vec7::Constant(std::numeric_limits<double>::quiet_NaN()); }

Vec7 terminal_violation(const ShootingProblem& problem, const Vec14& zf) {
  Vec7 psi;
  psi.head<6>() = zf.head<6>() - problem.target;
  if (problem.coords == Coordinates::Mee) psi[5] = zf[5] - target_longitude(problem);
  psi[6] = zf[slot::kMassCostate];
  return psi;
}

}  // namespace

std::string_view to_string(Coordinates c) {
  switch (c) {
    case Coordinates::Cartesian: return "cartesian";
    case Coordinates::Mee: return "mee";
    case Coordinates::Cr3bp: return "cr3bp";
  }
  return "unknown";
}

Coordinates parse_coordinates(std::string_view name) {
  if (name == "cartesian") return Coordinates::Cartesian;
  if (name == "mee") return Coordinates::Mee;
  if (name == "cr3bp") return Coordinates::Cr3bp;
  throw std::invalid_argument("unknown coordinates '" + std::string(name) + "'");
}

void ShootingProblem::validate() const {
  if (!(tof > 0.0)) throw std::invalid_argument("time of flight must be positive");
  if (!(initial_mass > 0.0)) throw std::invalid_argument("initial mass must be positive");
  if (!initial_state.allFinite() || !target.allFinite()) {
    throw std::invalid_argument("boundary states must be finite");
  }
  if (n_rev < 0) throw std::invalid_argument("n_rev must be nonnegative");
  if (coords == Coordinates::Mee && model.mu != 1.0) {
    throw std::invalid_argument("MEE problems need the mu = 1 scale");
  }
  if (coords == Coordinates::Cr3bp && !(mu_ratio > 0.0 && mu_ratio < 0.5)) {
    throw std::invalid_argument("CR3BP mass ratio must lie in (0, 1/2)");
  }
  smoothing.validate();
  integrator.validate();
}

std::unique_ptr<Dynamics> make_dynamics(const ShootingProblem& problem, double rho) {
  SmoothingConfig cfg = problem.smoothing;
  cfg.rho = rho;
  cfg.validate();
  switch (problem.coords) {
    case Coordinates::Cartesian: return std::make_unique<CartesianDynamics>(problem.model, cfg);
    case Coordinates::Mee: return std::make_unique<MeeDynamics>(problem.model, cfg);
    case Coordinates::Cr3bp:
      return std::make_unique<Cr3bpDynamics>(problem.mu_ratio, problem.model, cfg);
  }
  throw std::invalid_argument("unknown coordinates");
}

double target_longitude(const ShootingProblem& problem) {
  const double L0 = problem.initial_state[5];
  double dL = std::fmod(problem.target[5] - L0, kTwoPi);
  if (dL < 0.0) dL += kTwoPi;
  return L0 + dL + kTwoPi * problem.n_rev;
}

Vec14 initial_augmented_state(const ShootingProblem& problem, const Vec7& eta0) {
  Vec14 z;
  z.head<6>() = problem.initial_state;
  z[slot::kMass] = problem.initial_mass;
  z.segment<7>(slot::kCostate) = eta0;
  return z;
}

TerminalState propagate_to_final(const ShootingProblem& problem, const Vec7& eta0, double rho) {
  TerminalState out;
  if (!eta0.allFinite()) {
    out.message = "non-finite costate guess";
    return out;
  }
  const auto dyn = make_dynamics(problem, rho);
  const auto res = propagate(*dyn, initial_augmented_state(problem, eta0), 0.0, problem.tof,
                             problem.integrator);
  out.z = res.y;
  out.ok = res.ok() && res.y.allFinite();
  out.message = res.ok() ? (out.ok ? "" : "non-finite state") : res.message;
  return out;
}

Vec7 residual(const ShootingProblem& problem, const Vec7& eta0, double rho) {
  const TerminalState ts = propagate_to_final(problem, eta0, rho);
  if (!ts.ok) return nan_vector();
  return terminal_violation(problem, ts.z);
}

Mat7 residual_jacobian(const ShootingProblem& problem, const Vec7& eta0, double rho) {
  const Mat7 bad = Mat7::Constant(std::numeric_limits<double>::quiet_NaN());
  if (!eta0.allFinite()) return bad;
  const auto dyn = make_dynamics(problem, rho);
  const StmResult res = integrate_with_stm(*dyn, initial_augmented_state(problem, eta0), 0.0,
                                           problem.tof, problem.integrator);
  if (!res.ok()) return bad;
  Mat7 J;
  for (int i = 0; i < 7; ++i)
    for (int j = 0; j < 7; ++j) J(i, j) = res.phi(kResidualRows[i], slot::kCostate + j);
  return J;
}

void ContinuationSchedule::validate() const {
  if (!(rho_final > 0.0) || !(rho_init >= rho_final)) {
    throw std::invalid_argument("continuation needs 0 < rho_final <= rho_init");
  }
  if (!(rho_factor > 0.0 && rho_factor < 1.0)) {
    throw std::invalid_argument("rho_factor must lie in (0, 1)");
  }
}

std::vector<double> ContinuationSchedule::ladder() const {
  validate();
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double rho = rho_init * std::pow(rho_factor, k);
    // Snap to rho_final when within roundoff of it.
    if (rho <= rho_final * (1.0 + 1e-9)) {
      out.push_back(rho_final);
      break;
    }
    out.push_back(rho);
  }
  return out;
}

SolveReport solve_with_continuation(const ShootingProblem& problem, const Vec7& eta0,
                                    const ContinuationSchedule& schedule,
                                    const RootSolveConfig& root_cfg) {
  problem.validate();
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.eta0_guess = eta0;
  report.eta0 = eta0;

  RootSolveConfig cfg = root_cfg;
  cfg.jacobian_mode = problem.use_stm ? JacobianMode::Analytic : JacobianMode::FiniteDifference;

  Vec7 x = eta0;
  for (const double rho : schedule.ladder()) {
    const ResidualFn fn = [&problem, rho](const Eigen::VectorXd& e) -> Eigen::VectorXd {
      return residual(problem, Vec7(e), rho);
    };
    JacobianFn jac;
    if (problem.use_stm) {
      jac = [&problem, rho](const Eigen::VectorXd& e) -> Eigen::MatrixXd {
        return residual_jacobian(problem, Vec7(e), rho);
      };
    }
    const RootReport rr = solve_root(fn, jac, x, cfg);

    StageReport stage;
    stage.rho = rho;
    stage.status = rr.status;
    stage.iterations = rr.iterations;
    stage.residual_evals = rr.residual_evals;
    stage.jacobian_evals = rr.jacobian_evals;
    stage.residual_norm = rr.residual_norm;
    if (rr.converged()) {
      x = rr.x;
      const TerminalState ts = propagate_to_final(problem, x, rho);
      stage.final_mass_kg = ts.z[slot::kMass] * problem.scale.mass_unit;
    }
    report.stages.push_back(stage);
    if (!rr.converged()) {
      report.failed_stage = static_cast<int>(report.stages.size()) - 1;
      break;
    }
  }

  report.converged = report.failed_stage < 0;
  report.eta0 = x;
  const StageReport& last = report.stages.back();
  report.residual_inf_norm = last.residual_norm;
  report.final_mass_kg = last.final_mass_kg;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<SamplePoint> sample_solution(const ShootingProblem& problem, const Vec7& eta0, double rho,
                                         int n_points) {
  if (n_points < 2) throw std::invalid_argument("sample_solution needs at least two points");
  problem.validate();
  const auto dyn = make_dynamics(problem, rho);
  std::vector<double> times(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    times[static_cast<std::size_t>(i)] = problem.tof * static_cast<double>(i) / (n_points - 1);
  }
  times.back() = problem.tof;
  const auto res = propagate(*dyn, initial_augmented_state(problem, eta0), 0.0, problem.tof,
                             problem.integrator, times);
  if (!res.ok()) throw std::runtime_error("sample_solution: " + res.message);

  std::vector<SamplePoint> out;
  out.reserve(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    SamplePoint s;
    s.t = times[i];
    s.z = res.samples[i];
    dyn->position_velocity(s.z, s.r, s.v);
    const ControlEval u = dyn->control(s.z);
    s.thrust_dir = dyn->thrust_direction(s.z);
    s.H = dyn->hamiltonian(s.z);
    s.S = u.S;
    s.delta = u.delta;
    out.push_back(s);
  }
  return out;
}

int revolution_count(const std::vector<SamplePoint>& samples) {
  if (samples.size() < 2) return 0;
  const Vec3 h = samples.front().r.cross(samples.front().v);
  double swept = 0.0;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const Vec3& a = samples[i - 1].r;
    const Vec3& b = samples[i].r;
    const Vec3 c = a.cross(b);
    const double ang = std::atan2(c.norm(), a.dot(b));
    swept += c.dot(h) >= 0.0 ? ang : -ang;
  }
  return static_cast<int>(std::floor(swept / kTwoPi));
}

}  // namespace mintraj
