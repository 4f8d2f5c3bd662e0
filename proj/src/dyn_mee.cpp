#include "mintraj/dyn_mee.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mintraj/dual.hpp"

namespace mintraj {

Vec6 MeeElements::to_vector() const {
  Vec6 x;
  x << p, f, g, h, k, L;
  return x;
}

MeeElements MeeElements::from_vector(const Vec6& x) { return {x[0], x[1], x[2], x[3], x[4], x[5]}; }

MeeElements coe_to_mee(const ClassicalElements& coe) {
  if (!(coe.e >= 0.0) || !(coe.i >= 0.0) || !(coe.i < std::numbers::pi)) {
    throw std::invalid_argument("coe_to_mee: need e >= 0 and inclination in [0, pi)");
  }
  const double p = coe.a * (1.0 - coe.e * coe.e);
  if (!(p > 0.0)) throw std::invalid_argument("coe_to_mee: a(1 - e^2) must be positive");
  const double lon_peri = coe.argp + coe.raan;
  const double t = std::tan(0.5 * coe.i);
  return {p,
          coe.e * std::cos(lon_peri),
          coe.e * std::sin(lon_peri),
          t * std::cos(coe.raan),
          t * std::sin(coe.raan),
          coe.nu + coe.argp + coe.raan};
}

ClassicalElements cartesian_to_coe(const Vec3& r, const Vec3& v, double mu) {
  const Vec3 hv = r.cross(v);
  const double hn = hv.norm();
  if (hn == 0.0) throw std::invalid_argument("cartesian_to_coe: rectilinear orbit");
  const double rn = r.norm();
  const double p = hn * hn / mu;
  const Vec3 e_vec = ((v.squaredNorm() - mu / rn) * r - r.dot(v) * v) / mu;

  ClassicalElements coe;
  coe.e = e_vec.norm();
  coe.a = p / (1.0 - coe.e * coe.e);
  coe.i = std::atan2(std::hypot(hv.x(), hv.y()), hv.z());
  coe.raan = std::atan2(hv.x(), -hv.y());
  const Vec3 node(std::cos(coe.raan), std::sin(coe.raan), 0.0);
  const Vec3 in_plane = (hv / hn).cross(node);
  const double arg_lat = std::atan2(r.dot(in_plane), r.dot(node));
  coe.nu = std::atan2(std::sqrt(p / mu) * r.dot(v) / rn, p / rn - 1.0);
  coe.argp = arg_lat - coe.nu;
  return coe;
}

MeeElements cartesian_to_mee(const Vec3& r, const Vec3& v, double mu) {
  const Vec3 hv = r.cross(v);
  const double hn = hv.norm();
  if (hn == 0.0) throw std::invalid_argument("cartesian_to_mee: rectilinear orbit");
  const Vec3 w = hv / hn;
  const double rn = r.norm();

  MeeElements out;
  out.p = hn * hn / mu;
  out.h = -w.y() / (1.0 + w.z());
  out.k = w.x() / (1.0 + w.z());
  const double h = out.h;
  const double k = out.k;
  const double s2 = 1.0 + h * h + k * k;
  const Vec3 f_hat = Vec3(1.0 - k * k + h * h, 2.0 * k * h, -2.0 * k) / s2;
  const Vec3 g_hat = Vec3(2.0 * k * h, 1.0 + k * k - h * h, 2.0 * h) / s2;
  const Vec3 e_vec = v.cross(hv) / mu - r / rn;
  out.f = e_vec.dot(f_hat);
  out.g = e_vec.dot(g_hat);
  out.L = std::atan2(r.dot(g_hat), r.dot(f_hat));
  return out;
}

void mee_to_cartesian(const MeeElements& x, double mu, Vec3& r, Vec3& v) {
  const double cL = std::cos(x.L);
  const double sL = std::sin(x.L);
  const double alpha2 = x.h * x.h - x.k * x.k;
  const double s2 = 1.0 + x.h * x.h + x.k * x.k;
  const double w = 1.0 + x.f * cL + x.g * sL;
  const double rn = x.p / w;
  const double hk = x.h * x.k;
  r = rn / s2 * Vec3(cL + alpha2 * cL + 2.0 * hk * sL, sL - alpha2 * sL + 2.0 * hk * cL,
                     2.0 * (x.h * sL - x.k * cL));
  const double sp = std::sqrt(mu / x.p);
  v = -sp / s2 *
      Vec3(sL + alpha2 * sL - 2.0 * hk * cL + x.g - 2.0 * x.f * hk + alpha2 * x.g,
           -cL + alpha2 * cL + 2.0 * hk * sL - x.f + 2.0 * x.g * hk + alpha2 * x.f,
           -2.0 * (x.h * cL + x.k * sL + x.f * x.h + x.g * x.k));
}

Mat3 rtn_basis(const Vec3& r, const Vec3& v) {
  const Vec3 rh = r.normalized();
  const Vec3 nh = r.cross(v).normalized();
  Mat3 basis;
  basis.col(0) = rh;
  basis.col(1) = nh.cross(rh);
  basis.col(2) = nh;
  return basis;
}

namespace {

// A has a single nonzero entry (L-dot); B is 6x3.
template <typename T>
struct ControlAffine {
  T a_L;
  std::array<std::array<T, 3>, 6> B;
};

template <typename T>
ControlAffine<T> control_affine(const T& p, const T& f, const T& g, const T& h, const T& k,
                                const T& L) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T sL = sin(L);
  const T cL = cos(L);
  const T sqp = sqrt(p);
  const T q = 1.0 + f * cL + g * sL;
  const T s2 = 1.0 + h * h + k * k;
  const T hk = h * sL - k * cL;
  const T sq_q = sqp / q;
  const T zero(0.0);

  ControlAffine<T> out;
  const T qp = q / p;
  out.a_L = sqp * qp * qp;
  out.B[0] = {zero, 2.0 * p * sq_q, zero};
  out.B[1] = {sqp * sL, sq_q * ((q + 1.0) * cL + f), -(sq_q * g) * hk};
  out.B[2] = {-(sqp * cL), sq_q * ((q + 1.0) * sL + g), (sq_q * f) * hk};
  out.B[3] = {zero, zero, 0.5 * sq_q * s2 * cL};
  out.B[4] = {zero, zero, 0.5 * sq_q * s2 * sL};
  out.B[5] = {zero, zero, sq_q * hk};
  return out;
}

void check_domain(const Vec14& z, const ThrustModel& model) {
  if (model.mu != 1.0) throw std::invalid_argument("MEE dynamics require the mu = 1 scale");
  if (!(z[0] > 0.0)) throw std::domain_error("MEE state: semi-latus rectum must be positive");
  const double q = 1.0 + z[1] * std::cos(z[5]) + z[2] * std::sin(z[5]);
  if (!(q > 0.0)) throw std::domain_error("MEE state: q must be positive");
}

// Evaluates the vector field on scalar type T. Costate rates are -dH/dx and -dH/dm with the
// throttle held at its current value and the steering direction substituted. In terms of the
// primer P = B^T lambda:
//   P0 = sqrt(p) (lf s - lg c)
//   P1 = (sqrt(p)/q) (2 p lp + lf ((q+1) c + f) + lg ((q+1) s + g))
//   P2 = (sqrt(p)/q) (w (lg f - lf g + lL) + (s2/2)(lh c + lk s))
// with s = sin L, c = cos L, w = h s - k c, s2 = 1 + h^2 + k^2.
template <typename T>
void mee_field(const std::array<T, 14>& z, const ThrustModel& model, const SmoothingConfig& cfg,
               std::array<T, 14>& out) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T& p = z[0];
  const T& f = z[1];
  const T& g = z[2];
  const T& h = z[3];
  const T& k = z[4];
  const T& L = z[5];
  const T& m = z[6];
  const T& lp = z[7];
  const T& lf = z[8];
  const T& lg = z[9];
  const T& lh = z[10];
  const T& lk = z[11];
  const T& lL = z[12];
  const T& lam_m = z[13];

  const ControlAffine<T> ca = control_affine(p, f, g, h, k, L);
  const T s = sin(L);
  const T c = cos(L);
  const T sp = sqrt(p);
  const T q = 1.0 + f * c + g * s;
  const T qL = g * c - f * s;
  const T w = h * s - k * c;
  const T s2 = 1.0 + h * h + k * k;
  const T rq = sp / q;

  const T E = lg * f - lf * g + lL;
  const T F = lh * c + lk * s;
  const T Q1 = 2.0 * p * lp + lf * ((q + 1.0) * c + f) + lg * ((q + 1.0) * s + g);
  const T Q2 = w * E + 0.5 * s2 * F;
  const std::array<T, 3> P = {sp * (lf * s - lg * c), rq * Q1, rq * Q2};

  const T pn = sqrt(P[0] * P[0] + P[1] * P[1] + P[2] * P[2]);
  const T S = model.c * pn / m + lam_m - 1.0;
  const double s_val = value_of(S);
  const T delta = chain(S, throttle(s_val, cfg), throttle_derivative(s_val, cfg));

  const T accel = model.t_max / m * delta;
  const bool degenerate = value_of(pn) < kPrimerFloor;
  std::array<T, 3> u;  // unit primer
  if (degenerate) {
    u = {T(0.0), T(0.0), T(0.0)};
  } else {
    for (int j = 0; j < 3; ++j) u[j] = P[j] / pn;
  }
  std::array<T, 3> a_rtn;
  if (degenerate) {
    a_rtn = {accel, T(0.0), T(0.0)};
  } else {
    for (int j = 0; j < 3; ++j) a_rtn[j] = -(accel * u[j]);
  }
  for (int i = 0; i < 6; ++i) {
    T acc = (i == 5) ? ca.a_L : T(0.0);
    for (int j = 0; j < 3; ++j) acc = acc + ca.B[i][j] * a_rtn[j];
    out[i] = acc;
  }
  out[6] = -(model.t_max / model.c) * delta;

  // dP_j/dx_k, k over (p, f, g, h, k, L).
  const T inv_q = 1.0 / q;
  const T half_inv_p = 0.5 / p;
  std::array<std::array<T, 6>, 3> dP;
  dP[0] = {P[0] * half_inv_p, T(0.0), T(0.0), T(0.0), T(0.0), sp * (lf * c + lg * s)};

  const std::array<T, 6> d_rq = {rq * half_inv_p, -(rq * c) * inv_q, -(rq * s) * inv_q,
                                 T(0.0),          T(0.0),            -(rq * qL) * inv_q};
  const std::array<T, 6> dQ1 = {2.0 * lp,
                                lf * (c * c + 1.0) + lg * (c * s),
                                lf * (s * c) + lg * (s * s + 1.0),
                                T(0.0),
                                T(0.0),
                                lf * (qL * c - (q + 1.0) * s) + lg * (qL * s + (q + 1.0) * c)};
  const std::array<T, 6> dQ2 = {T(0.0),
                                w * lg,
                                -(w * lf),
                                s * E + h * F,
                                k * F - c * E,
                                (h * c + k * s) * E + 0.5 * s2 * (lk * c - lh * s)};
  for (int i = 0; i < 6; ++i) {
    dP[1][i] = d_rq[i] * Q1 + rq * dQ1[i];
    dP[2][i] = d_rq[i] * Q2 + rq * dQ2[i];
  }

  // a_L = q^2 p^(-3/2)
  const T p_m32 = 1.0 / (p * sp);
  const std::array<T, 6> da_L = {-1.5 * ca.a_L / p, 2.0 * q * c * p_m32, 2.0 * q * s * p_m32,
                                 T(0.0),            T(0.0),              2.0 * q * qL * p_m32};
  const T thrust_scale = model.t_max * delta / m;
  for (int i = 0; i < 6; ++i) {
    const T dH = lL * da_L[i] - thrust_scale * (u[0] * dP[0][i] + u[1] * dP[1][i] + u[2] * dP[2][i]);
    out[7 + i] = -dH;
  }
  out[13] = -(thrust_scale * pn / m);
}

}  // namespace

Vec6 mee_a_vector(const Vec6& x) {
  const auto ca = control_affine(x[0], x[1], x[2], x[3], x[4], x[5]);
  Vec6 a = Vec6::Zero();
  a[5] = ca.a_L;
  return a;
}

Eigen::Matrix<double, 6, 3> mee_b_matrix(const Vec6& x) {
  const auto ca = control_affine(x[0], x[1], x[2], x[3], x[4], x[5]);
  Eigen::Matrix<double, 6, 3> B;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = ca.B[i][j];
  return B;
}

ControlEval mee_control(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  const Eigen::Matrix<double, 6, 3> B = mee_b_matrix(z.head<6>());
  const Vec3 primer = B.transpose() * z.segment<6>(7);
  const double pn = primer.norm();
  ControlEval out;
  if (pn < kPrimerFloor) {
    out.alpha_hat = Vec3::UnitX();
    out.degenerate = true;
  } else {
    out.alpha_hat = -primer / pn;
  }
  out.S = model.c * pn / z[6] + z[13] - 1.0;
  out.delta = throttle(out.S, cfg);
  return out;
}

Vec14 mee_rhs(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  check_domain(z, model);
  std::array<double, 14> in;
  std::array<double, 14> out;
  for (int i = 0; i < 14; ++i) in[i] = z[i];
  mee_field(in, model, cfg, out);
  return Eigen::Map<const Vec14>(out.data());
}

void mee_rhs_and_jacobian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg,
                          Vec14& dz, Mat14& jac) {
  check_domain(z, model);
  const Eigen::Matrix<double, 6, 3> B = mee_b_matrix(z.head<6>());
  if ((B.transpose() * z.segment<6>(7)).norm() < kPrimerFloor) {
    throw std::domain_error("mee_rhs_jacobian: primer on the singular set");
  }
  using D = Dual<double, 14>;
  std::array<D, 14> in;
  std::array<D, 14> out;
  for (int i = 0; i < 14; ++i) in[i] = D::variable(z[i], i);
  mee_field(in, model, cfg, out);
  for (int i = 0; i < 14; ++i) {
    dz[i] = out[i].v;
    for (int j = 0; j < 14; ++j) jac(i, j) = out[i].d[j];
  }
}

Mat14 mee_rhs_jacobian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  Vec14 dz;
  Mat14 jac;
  mee_rhs_and_jacobian(z, model, cfg, dz, jac);
  return jac;
}

double mee_hamiltonian(const Vec14& z, const ThrustModel& model, const SmoothingConfig& cfg) {
  const Vec6 x = z.head<6>();
  const ControlEval u = mee_control(z, model, cfg);
  const Vec6 xdot = mee_a_vector(x) + mee_b_matrix(x) * (model.t_max / z[6] * u.delta * u.alpha_hat);
  const double k = model.t_max / model.c * u.delta;
  return k + z.segment<6>(7).dot(xdot) - z[13] * k;
}

MeeDynamics::MeeDynamics(const ThrustModel& model, const SmoothingConfig& cfg)
    : model_(model), cfg_(cfg) {
  if (model.mu != 1.0) throw std::invalid_argument("MEE dynamics require the mu = 1 scale");
}

void MeeDynamics::position_velocity(const Vec14& z, Vec3& r, Vec3& v) const {
  mee_to_cartesian(MeeElements::from_vector(z.head<6>()), 1.0, r, v);
}

Vec3 MeeDynamics::thrust_direction(const Vec14& z) const {
  Vec3 r;
  Vec3 v;
  position_velocity(z, r, v);
  return rtn_basis(r, v) * control(z).alpha_hat;
}

}  // namespace mintraj
