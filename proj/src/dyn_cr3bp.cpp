#include "mintraj/dyn_cr3bp.hpp"

#include <cmath>
#include <stdexcept>

#include "mintraj/dual.hpp"
#include "mintraj/dyn_cartesian.hpp"

namespace mintraj {

namespace {

void check_mass_ratio(double mu) {
  if (!(mu > 0.0) || !(mu < 0.5)) throw std::invalid_argument("mass ratio must lie in (0, 1/2)");
}

template <typename T>
struct PrimaryOffsets {
  std::array<T, 3> d1;
  std::array<T, 3> d2;
  T r1;
  T r2;
};

template <typename T>
PrimaryOffsets<T> offsets(const T& x, const T& y, const T& z, double mu) {
  using std::sqrt;
  PrimaryOffsets<T> o;
  o.d1 = {x + mu, y, z};
  o.d2 = {x + (mu - 1.0), y, z};
  o.r1 = sqrt(o.d1[0] * o.d1[0] + y * y + z * z);
  o.r2 = sqrt(o.d2[0] * o.d2[0] + y * y + z * z);
  return o;
}

template <typename T>
std::array<T, 3> gravity_impl(const T& x, const T& y, const T& z, double mu) {
  const auto o = offsets(x, y, z, mu);
  const T k1 = (1.0 - mu) / (o.r1 * o.r1 * o.r1);
  const T k2 = mu / (o.r2 * o.r2 * o.r2);
  return {x - k1 * o.d1[0] - k2 * o.d2[0], y - k1 * y - k2 * y, -(k1 * z) - k2 * z};
}

// Hessian of the effective potential:
//   diag(1,1,0) - sum_i w_i (I / r_i^3 - 3 d_i d_i^T / r_i^5)
template <typename T>
std::array<std::array<T, 3>, 3> gradient_impl(const T& x, const T& y, const T& z, double mu) {
  const auto o = offsets(x, y, z, mu);
  const T r1_3 = o.r1 * o.r1 * o.r1;
  const T r2_3 = o.r2 * o.r2 * o.r2;
  const T a1 = (1.0 - mu) / r1_3;
  const T a2 = mu / r2_3;
  const T b1 = 3.0 * a1 / (o.r1 * o.r1);
  const T b2 = 3.0 * a2 / (o.r2 * o.r2);
  std::array<std::array<T, 3>, 3> G;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      T e = b1 * o.d1[i] * o.d1[j] + b2 * o.d2[i] * o.d2[j];
      if (i == j) e = e - a1 - a2 + ((i < 2) ? 1.0 : 0.0);
      G[i][j] = e;
    }
  }
  return G;
}

void check_collision(const Vec3& r, double mu) {
  const auto o = offsets(r.x(), r.y(), r.z(), mu);
  if (o.r1 == 0.0 || o.r2 == 0.0) throw std::domain_error("CR3BP state collides with a primary");
}

template <typename T>
void cr3bp_field(const std::array<T, 14>& z, double mu, const ThrustModel& model,
                 const SmoothingConfig& cfg, std::array<T, 14>& out) {
  using std::sqrt;
  const T& m = z[6];
  const T lvn = sqrt(z[10] * z[10] + z[11] * z[11] + z[12] * z[12]);
  const T S = model.c * lvn / m + z[13] - 1.0;
  const double s_val = value_of(S);
  const T delta = chain(S, throttle(s_val, cfg), throttle_derivative(s_val, cfg));
  const T accel = model.t_max / m * delta;

  const auto g = gravity_impl(z[0], z[1], z[2], mu);
  const auto G = gradient_impl(z[0], z[1], z[2], mu);
  const bool degenerate = value_of(lvn) < kPrimerFloor;

  for (int i = 0; i < 3; ++i) out[i] = z[3 + i];
  const std::array<T, 3> h = {2.0 * z[4], -2.0 * z[3], T(0.0)};
  for (int i = 0; i < 3; ++i) {
    const T thrust = degenerate ? (i == 0 ? accel : T(0.0)) : -(accel * z[10 + i] / lvn);
    out[3 + i] = g[i] + h[i] + thrust;
  }
  out[6] = -(model.t_max / model.c) * delta;
  // lambda_r-dot = -G^T lambda_v (G symmetric)
  for (int i = 0; i < 3; ++i) {
    out[7 + i] = -(G[0][i] * z[10] + G[1][i] * z[11] + G[2][i] * z[12]);
  }
  // lambda_v-dot = -lambda_r - H^T lambda_v, H^T lambda_v = [-2 lv_y, 2 lv_x, 0]
  out[10] = -z[7] + 2.0 * z[11];
  out[11] = -z[8] - 2.0 * z[10];
  out[12] = -z[9];
  out[13] = -(model.t_max / (m * m)) * lvn * delta;
}

}  // namespace

Vec3 gravity_rotating(const Vec3& r, double mu_ratio) {
  check_mass_ratio(mu_ratio);
  check_collision(r, mu_ratio);
  const auto g = gravity_impl(r.x(), r.y(), r.z(), mu_ratio);
  return {g[0], g[1], g[2]};
}

Vec3 coriolis(const Vec3& v) { return {2.0 * v.y(), -2.0 * v.x(), 0.0}; }

Mat3 gravity_gradient(const Vec3& r, double mu_ratio) {
  check_mass_ratio(mu_ratio);
  check_collision(r, mu_ratio);
  const auto G = gradient_impl(r.x(), r.y(), r.z(), mu_ratio);
  Mat3 out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = G[i][j];
  return out;
}

Mat3 coriolis_matrix() {
  Mat3 H;
  H << 0.0, 2.0, 0.0, -2.0, 0.0, 0.0, 0.0, 0.0, 0.0;
  return H;
}

double effective_potential(const Vec3& r, double mu_ratio) {
  check_mass_ratio(mu_ratio);
  check_collision(r, mu_ratio);
  const auto o = offsets(r.x(), r.y(), r.z(), mu_ratio);
  return 0.5 * (r.x() * r.x() + r.y() * r.y()) + (1.0 - mu_ratio) / o.r1 + mu_ratio / o.r2;
}

double jacobi_constant(const Vec3& r, const Vec3& v, double mu_ratio) {
  return 2.0 * effective_potential(r, mu_ratio) - v.squaredNorm();
}

namespace {

double bisect_collinear(double lo, double hi, double mu) {
  auto gx = [mu](double x) { return gravity_impl(x, 0.0, 0.0, mu)[0]; };
  double flo = gx(lo);
  const double fhi = gx(hi);
  if (!(flo < 0.0 && fhi > 0.0)) {
    throw std::runtime_error("libration_points: collinear root not bracketed");
  }
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = gx(mid);
    if (fm == 0.0) return mid;
    if (fm < 0.0) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return std::abs(gx(lo)) < std::abs(gx(hi)) ? lo : hi;
}

}  // namespace

std::array<Vec3, 5> libration_points(double mu_ratio) {
  check_mass_ratio(mu_ratio);
  const double eps = 1e-9;
  const double x1 = bisect_collinear(-mu_ratio + eps, 1.0 - mu_ratio - eps, mu_ratio);
  const double x2 = bisect_collinear(1.0 - mu_ratio + eps, 2.0, mu_ratio);
  const double x3 = bisect_collinear(-2.0, -mu_ratio - eps, mu_ratio);
  const double half_sqrt3 = 0.5 * std::sqrt(3.0);
  return {Vec3(x1, 0.0, 0.0), Vec3(x2, 0.0, 0.0), Vec3(x3, 0.0, 0.0),
          Vec3(0.5 - mu_ratio, half_sqrt3, 0.0), Vec3(0.5 - mu_ratio, -half_sqrt3, 0.0)};
}

ControlEval cr3bp_switching(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  // Same primer law and switching function as the two-body Cartesian form.
  return cartesian_control(z, model, cfg);
}

Vec14 cr3bp_rhs(const Vec14& z, double mu_ratio, const ThrustModel& model,
                const SmoothingConfig& cfg) {
  check_collision(z.head<3>(), mu_ratio);
  std::array<double, 14> in;
  std::array<double, 14> out;
  for (int i = 0; i < 14; ++i) in[i] = z[i];
  cr3bp_field(in, mu_ratio, model, cfg, out);
  return Eigen::Map<const Vec14>(out.data());
}

Mat14 cr3bp_rhs_jacobian(const Vec14& z, double mu_ratio, const ThrustModel& model,
                         const SmoothingConfig& cfg) {
  check_collision(z.head<3>(), mu_ratio);
  if (z.segment<3>(10).norm() < kPrimerFloor) {
    throw std::domain_error("cr3bp_rhs_jacobian: velocity costate on the singular set");
  }
  using D = Dual<double, 14>;
  std::array<D, 14> in;
  std::array<D, 14> out;
  for (int i = 0; i < 14; ++i) in[i] = D::variable(z[i], i);
  cr3bp_field(in, mu_ratio, model, cfg, out);
  Mat14 J;
  for (int i = 0; i < 14; ++i)
    for (int j = 0; j < 14; ++j) J(i, j) = out[i].d[j];
  return J;
}

double cr3bp_hamiltonian(const Vec14& z, double mu_ratio, const ThrustModel& model,
                         const SmoothingConfig& cfg) {
  const Vec3 r = z.segment<3>(0);
  const Vec3 v = z.segment<3>(3);
  const ControlEval u = cr3bp_switching(z, model, cfg);
  const Vec3 f_v = gravity_rotating(r, mu_ratio) + coriolis(v) +
                   (model.t_max / z[6] * u.delta) * u.alpha_hat;
  const double k = model.t_max / model.c * u.delta;
  return k + z.segment<3>(7).dot(v) + z.segment<3>(10).dot(f_v) - z[13] * k;
}

Cr3bpDynamics::Cr3bpDynamics(double mu_ratio, const ThrustModel& model, const SmoothingConfig& cfg)
    : mu_ratio_(mu_ratio), model_(model), cfg_(cfg) {
  check_mass_ratio(mu_ratio);
}

}  // namespace mintraj
