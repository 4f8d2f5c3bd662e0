#pragma once

#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace mintraj {

enum class JacobianMode { Analytic, FiniteDifference };

struct RootSolveConfig {
  int max_iters = 200;        // trial steps, not counting Jacobian work
  double residual_tol = 1e-9;  // infinity norm
  JacobianMode jacobian_mode = JacobianMode::Analytic;
  double fd_step = 1.4901161193847656e-08;  // sqrt(machine epsilon)
  double radius_factor = 1.0;   // initial trust radius relative to the scaled initial guess
  double step_tol = 1e-14;    // relative trust-radius floor

  void validate() const;
};

enum class RootStatus { Converged, MaxIterations, TrustRegionCollapse, NonFiniteResidual };

const char* to_string(RootStatus s);

struct RootReport {
  RootStatus status = RootStatus::MaxIterations;
  Eigen::VectorXd x;
  Eigen::VectorXd f;
  int iterations = 0;
  int residual_evals = 0;
  int jacobian_evals = 0;
  double residual_norm = std::numeric_limits<double>::infinity();

  bool converged() const { return status == RootStatus::Converged; }
};

/// A residual that cannot be evaluated should return non-finite entries.
using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JacobianFn = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

/// Powell hybrid dog-leg trust-region solver with Broyden updates between Jacobian
/// evaluations. `jacobian` may be empty, in which case central differences are used
/// regardless of cfg.jacobian_mode.
RootReport solve_root(const ResidualFn& residual, const JacobianFn& jacobian,
                      const Eigen::VectorXd& x0, const RootSolveConfig& cfg);

/// Central-difference Jacobian with step fd_step * max(1, |x_i|).
Eigen::MatrixXd fd_jacobian(const ResidualFn& residual, const Eigen::VectorXd& x, double fd_step,
                            int* evals = nullptr);

}  // namespace mintraj
