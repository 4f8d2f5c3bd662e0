#include "mintraj/root_solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mintraj {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void RootSolveConfig::validate() const {
  if (max_iters <= 0) throw std::invalid_argument("max_iters must be positive");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("residual_tol must be positive");
  if (!(fd_step > 0.0)) throw std::invalid_argument("fd_step must be positive");
  if (!(radius_factor > 0.0)) throw std::invalid_argument("radius_factor must be positive");
  if (!(step_tol >= 0.0)) throw std::invalid_argument("step_tol must be nonnegative");
}

const char* to_string(RootStatus s) {
  switch (s) {
    case RootStatus::Converged: return "converged";
    case RootStatus::MaxIterations: return "iteration limit reached";
    case RootStatus::TrustRegionCollapse: return "trust region collapsed";
    case RootStatus::NonFiniteResidual: return "non-finite residual";
  }
  return "unknown";
}

MatrixXd fd_jacobian(const ResidualFn& residual, const VectorXd& x, double fd_step, int* evals) {
  const Eigen::Index n = x.size();
  MatrixXd J;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double h = fd_step * std::max(1.0, std::abs(x[j]));
    VectorXd xp = x;
    VectorXd xm = x;
    xp[j] += h;
    xm[j] -= h;
    const VectorXd fp = residual(xp);
    const VectorXd fm = residual(xm);
    if (evals) *evals += 2;
    if (J.size() == 0) J.resize(fp.size(), n);
    J.col(j) = (fp - fm) / (xp[j] - xm[j]);
  }
  return J;
}

namespace {

bool all_finite(const VectorXd& v) { return v.allFinite(); }

// Dog-leg step in variables scaled by `diag`.
VectorXd dogleg(const MatrixXd& J, const VectorXd& f, const VectorXd& diag, double delta) {
  const Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(J);
  const VectorXd gn = -cod.solve(f);
  const VectorXd s_gn = diag.cwiseProduct(gn);
  if (s_gn.allFinite() && s_gn.norm() <= delta) return gn;

  const MatrixXd Js = J * diag.cwiseInverse().asDiagonal();
  const VectorXd g = Js.transpose() * f;
  const double gnorm = g.norm();
  if (gnorm == 0.0) return gn;
  const double jg = (Js * g).squaredNorm();
  const VectorXd s_c = -(g.squaredNorm() / jg) * g;
  VectorXd s;
  if (!s_gn.allFinite() || s_c.norm() >= delta) {
    s = -(delta / gnorm) * g;
  } else {
    // Intersect s_c + tau (s_gn - s_c) with the trust sphere.
    const VectorXd d = s_gn - s_c;
    const double a = d.squaredNorm();
    const double b = 2.0 * s_c.dot(d);
    const double c = s_c.squaredNorm() - delta * delta;
    const double tau = (-b + std::sqrt(std::max(0.0, b * b - 4.0 * a * c))) / (2.0 * a);
    s = s_c + tau * d;
  }
  return s.cwiseQuotient(diag);
}

}  // namespace

RootReport solve_root(const ResidualFn& residual, const JacobianFn& jacobian, const VectorXd& x0,
                      const RootSolveConfig& cfg) {
  cfg.validate();
  RootReport rep;
  rep.x = x0;
  rep.f = residual(x0);
  ++rep.residual_evals;
  if (!all_finite(rep.f)) {
    rep.status = RootStatus::NonFiniteResidual;
    return rep;
  }
  rep.residual_norm = rep.f.lpNorm<Eigen::Infinity>();
  if (rep.residual_norm < cfg.residual_tol) {
    rep.status = RootStatus::Converged;
    return rep;
  }

  const bool analytic = cfg.jacobian_mode == JacobianMode::Analytic && static_cast<bool>(jacobian);
  auto eval_jacobian = [&](const VectorXd& x) {
    ++rep.jacobian_evals;
    if (analytic) return jacobian(x);
    return fd_jacobian(residual, x, cfg.fd_step, &rep.residual_evals);
  };

  const double eps = std::numeric_limits<double>::epsilon();
  VectorXd diag;
  double delta = 0.0;
  double fnorm = rep.f.norm();
  int ncfail = 0;
  int ncsuc = 0;

  auto finish = [&](RootStatus s) {
    rep.status = s;
    return rep;
  };

  while (true) {
    MatrixXd J = eval_jacobian(rep.x);
    if (!J.allFinite()) return finish(RootStatus::NonFiniteResidual);

    const VectorXd colnorm = J.colwise().norm().transpose();
    if (diag.size() == 0) {
      diag = colnorm;
      for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (diag[i] == 0.0) diag[i] = 1.0;
      }
      const double xnorm = diag.cwiseProduct(rep.x).norm();
      delta = xnorm > 0.0 ? cfg.radius_factor * xnorm : cfg.radius_factor;
    } else {
      diag = diag.cwiseMax(colnorm);
    }

    while (true) {
      if (rep.iterations >= cfg.max_iters) return finish(RootStatus::MaxIterations);
      const VectorXd p = dogleg(J, rep.f, diag, delta);
      const double pnorm = diag.cwiseProduct(p).norm();
      if (rep.iterations == 0) delta = std::min(delta, pnorm);
      ++rep.iterations;

      const VectorXd x_trial = rep.x + p;
      const VectorXd f_trial = residual(x_trial);
      ++rep.residual_evals;
      const double xnorm = diag.cwiseProduct(rep.x).norm();

      if (!all_finite(f_trial)) {
        delta *= 0.5;
        ncsuc = 0;
        ++ncfail;
        if (delta <= std::max(cfg.step_tol * xnorm, eps * eps)) {
          return finish(RootStatus::NonFiniteResidual);
        }
        if (ncfail == 2) break;
        continue;
      }

      const double fnorm1 = f_trial.norm();
      const double actred = fnorm1 < fnorm ? 1.0 - (fnorm1 / fnorm) * (fnorm1 / fnorm) : -1.0;
      const double lin = (rep.f + J * p).norm();
      const double prered = lin < fnorm ? 1.0 - (lin / fnorm) * (lin / fnorm) : 0.0;
      const double ratio = prered > 0.0 ? actred / prered : 0.0;

      if (ratio < 0.1) {
        ncsuc = 0;
        ++ncfail;
        delta *= 0.5;
      } else {
        ncfail = 0;
        ++ncsuc;
        if (ratio >= 0.5 || ncsuc > 1) delta = std::max(delta, pnorm / 0.5);
        if (std::abs(ratio - 1.0) <= 0.1) delta = pnorm / 0.5;
      }

      const VectorXd f_old = rep.f;
      if (ratio >= 1e-4) {
        rep.x = x_trial;
        rep.f = f_trial;
        fnorm = fnorm1;
        rep.residual_norm = rep.f.lpNorm<Eigen::Infinity>();
        if (rep.residual_norm < cfg.residual_tol) return finish(RootStatus::Converged);
      }

      const double xnorm_new = diag.cwiseProduct(rep.x).norm();
      if (delta <= cfg.step_tol * xnorm_new || 0.1 * std::max(0.1 * delta, pnorm) <= eps * xnorm_new ||
          delta == 0.0) {
        return finish(RootStatus::TrustRegionCollapse);
      }
      if (ncfail == 2) break;

      // Broyden rank-one update in the scaled norm.
      const VectorXd Dp = diag.cwiseProduct(p);
      const double dp2 = Dp.squaredNorm();
      if (dp2 > 0.0) {
        J += (f_trial - f_old - J * p) * diag.cwiseProduct(Dp).transpose() / dp2;
      }
    }
  }
}

}  // namespace mintraj
