#pragma once

// Forward-mode dual numbers with a fixed number of directional slots.
// Nestable: Dual<Dual<double, 14>, 7> carries second derivatives.

#include <array>
#include <cmath>
#include <type_traits>

namespace mintraj {

template <typename T, int N>
struct Dual {
  T v{};
  std::array<T, N> d{};

  Dual() : v(0.0) { d.fill(T(0.0)); }
  Dual(const T& value) : v(value) { d.fill(T(0.0)); }  // NOLINT: implicit by design of the algebra
  template <typename U = T>
    requires(!std::is_same_v<U, double>)
  Dual(double value) : v(T(value)) {  // NOLINT
    d.fill(T(0.0));
  }

  static Dual variable(const T& value, int index) {
    Dual x(value);
    x.d[index] = T(1.0);
    return x;
  }

  Dual operator-() const {
    Dual r;
    r.v = -v;
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }

  friend Dual operator+(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v + b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
  }
  friend Dual operator-(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v - b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] - b.d[i];
    return r;
  }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    const T inv = T(1.0) / b.v;
    r.v = a.v * inv;
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
    return r;
  }

  // Inner-scalar overloads (no derivative work on the constant side).
  friend Dual operator+(const Dual& a, const T& b) {
    Dual r = a;
    r.v = r.v + b;
    return r;
  }
  friend Dual operator+(const T& a, const Dual& b) { return b + a; }
  friend Dual operator-(const Dual& a, const T& b) {
    Dual r = a;
    r.v = r.v - b;
    return r;
  }
  friend Dual operator-(const T& a, const Dual& b) {
    Dual r = -b;
    r.v = r.v + a;
    return r;
  }
  friend Dual operator*(const Dual& a, const T& b) {
    Dual r;
    r.v = a.v * b;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b;
    return r;
  }
  friend Dual operator*(const T& a, const Dual& b) { return b * a; }
  friend Dual operator/(const Dual& a, const T& b) {
    const T inv = T(1.0) / b;
    return a * inv;
  }

  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator+(const Dual& a, S b) {
    return a + T(static_cast<double>(b));
  }
  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator+(S a, const Dual& b) {
    return b + T(static_cast<double>(a));
  }
  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator-(const Dual& a, S b) {
    return a - T(static_cast<double>(b));
  }
  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator-(S a, const Dual& b) {
    return T(static_cast<double>(a)) - b;
  }
  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator*(const Dual& a, S b) {
    return a * T(static_cast<double>(b));
  }
  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator*(S a, const Dual& b) {
    return b * T(static_cast<double>(a));
  }
  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator/(const Dual& a, S b) {
    return a * T(1.0 / static_cast<double>(b));
  }
  template <typename S>
    requires std::is_arithmetic_v<S>
  friend Dual operator/(S a, const Dual& b) {
    return Dual(T(static_cast<double>(a))) / b;
  }

  Dual& operator+=(const Dual& o) { return *this = *this + o; }
  Dual& operator-=(const Dual& o) { return *this = *this - o; }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }
};

/// Applies a scalar function with known value f(x.v) and slope f'(x.v).
inline double chain(double /*x*/, double f, double /*df*/) { return f; }

template <typename T, int N>
Dual<T, N> chain(const Dual<T, N>& x, const T& f, const T& df) {
  Dual<T, N> r;
  r.v = f;
  for (int i = 0; i < N; ++i) r.d[i] = df * x.d[i];
  return r;
}

template <typename T, int N>
Dual<T, N> sqrt(const Dual<T, N>& x) {
  using std::sqrt;
  const T s = sqrt(x.v);
  return chain(x, s, T(0.5) / s);
}

template <typename T, int N>
Dual<T, N> sin(const Dual<T, N>& x) {
  using std::cos;
  using std::sin;
  return chain(x, sin(x.v), cos(x.v));
}

template <typename T, int N>
Dual<T, N> cos(const Dual<T, N>& x) {
  using std::cos;
  using std::sin;
  return chain(x, cos(x.v), -sin(x.v));
}

inline double value_of(double x) { return x; }

template <typename T, int N>
double value_of(const Dual<T, N>& x) {
  return value_of(x.v);
}

}  // namespace mintraj
