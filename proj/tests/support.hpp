#pragma once

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "mintraj/types.hpp"

namespace mintraj::testing {

/// Reproducible generator for property tests.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline Vec3 random_vec3(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }

inline Vec3 random_direction() {
  Vec3 v;
  do {
    v = random_vec3(-1.0, 1.0);
  } while (v.norm() < 1e-3 || v.norm() > 1.0);
  return v.normalized();
}

/// Largest entrywise |a - b| / max(1, |b|).
template <typename A, typename B>
double max_rel_error(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / std::max(1.0, std::abs(b(i, j))));
  return worst;
}

/// Central-difference Jacobian of a 14 -> 14 field, step h * max(1, |z_j|).
template <typename F>
Mat14 fd_jacobian14(F&& f, const Vec14& z, double h = 1e-7) {
  Mat14 J;
  for (int j = 0; j < 14; ++j) {
    const double step = h * std::max(1.0, std::abs(z[j]));
    Vec14 zp = z, zm = z;
    zp[j] += step;
    zm[j] -= step;
    J.col(j) = (f(zp) - f(zm)) / (2.0 * step);
  }
  return J;
}

/// Fourth-order central-difference gradient of a scalar function of the 14-vector.
template <typename F>
Vec14 fd_gradient14(F&& f, const Vec14& z, double h = 1e-4) {
  Vec14 g;
  for (int j = 0; j < 14; ++j) {
    const double step = h * std::max(1.0, std::abs(z[j]));
    auto at = [&](double k) {
      Vec14 w = z;
      w[j] += k * step;
      return f(w);
    };
    g[j] = (8.0 * (at(1.0) - at(-1.0)) - (at(2.0) - at(-2.0))) / (12.0 * step);
  }
  return g;
}

}  // namespace mintraj::testing
