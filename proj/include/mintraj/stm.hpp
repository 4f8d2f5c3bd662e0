#pragma once

#include <concepts>
#include <span>
#include <vector>

#include "mintraj/dynamics.hpp"
#include "mintraj/integrator.hpp"

namespace mintraj {

/// State plus row-major flattened STM.
using Vec210 = Eigen::Matrix<double, 210, 1>;

struct StmResult {
  Vec14 z = Vec14::Zero();
  Mat14 phi = Mat14::Identity();
  IntegrationStatus status = IntegrationStatus::Success;
  long steps = 0;
  std::string message;

  bool ok() const { return status == IntegrationStatus::Success; }
};

inline Vec210 pack_with_stm(const Vec14& z, const Mat14& phi) {
  Vec210 y;
  y.head<14>() = z;
  for (int i = 0; i < 14; ++i)
    for (int j = 0; j < 14; ++j) y[14 + 14 * i + j] = phi(i, j);
  return y;
}

inline Mat14 unpack_stm(const Vec210& y) {
  Mat14 phi;
  for (int i = 0; i < 14; ++i)
    for (int j = 0; j < 14; ++j) phi(i, j) = y[14 + 14 * i + j];
  return phi;
}

/// Integrates z' = f(z) together with Phi' = J(z) Phi, Phi(t0) = I, as one 210-vector.
/// `eval(z, dz, J)` fills both the field and its Jacobian.
template <typename Eval>
  requires std::invocable<Eval&, const Vec14&, Vec14&, Mat14&>
StmResult integrate_with_stm(Eval&& eval, const Vec14& z0, double t0, double tf,
                             const IntegratorConfig& cfg) {
  auto rhs = [&eval](double, const Vec210& y, Vec210& dy) {
    const Vec14 z = y.template head<14>();
    Vec14 dz;
    Mat14 J;
    eval(z, dz, J);
    dy.template head<14>() = dz;
    const Mat14 phi = unpack_stm(y);
    const Mat14 dphi = J * phi;
    for (int i = 0; i < 14; ++i)
      for (int j = 0; j < 14; ++j) dy[14 + 14 * i + j] = dphi(i, j);
  };
  const auto res = integrate<210>(rhs, pack_with_stm(z0, Mat14::Identity()), t0, tf, cfg);
  StmResult out;
  out.z = res.y.template head<14>();
  out.phi = unpack_stm(res.y);
  out.status = res.status;
  out.steps = res.steps;
  out.message = res.message;
  return out;
}

inline StmResult integrate_with_stm(const Dynamics& dyn, const Vec14& z0, double t0, double tf,
                                    const IntegratorConfig& cfg) {
  return integrate_with_stm(
      [&dyn](const Vec14& z, Vec14& dz, Mat14& J) { dyn.rhs_and_jacobian(z, dz, J); }, z0, t0, tf,
      cfg);
}

/// Plain 14-state propagation of an augmented system.
inline IntegrationResult<14> propagate(const Dynamics& dyn, const Vec14& z0, double t0, double tf,
                                       const IntegratorConfig& cfg,
                                       std::span<const double> sample_times = {}) {
  return integrate<14>([&dyn](double, const Vec14& z, Vec14& dz) { dz = dyn.rhs(z); }, z0, t0, tf,
                       cfg, sample_times);
}

}  // namespace mintraj
