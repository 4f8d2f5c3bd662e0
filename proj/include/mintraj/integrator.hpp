#pragma once

// Adaptive DOP853 integration of fixed-size autonomous or time-dependent systems.

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mintraj/dop853_tableau.hpp"

namespace mintraj {

struct IntegratorConfig {
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  long max_steps = 100'000;
  double initial_step = 0.0;  // 0 selects automatically

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_steps <= 0 || initial_step < 0.0) {
      throw std::invalid_argument("integrator tolerances and max_steps must be positive");
    }
  }
};

enum class IntegrationStatus { Success, MaxStepsExceeded, StepTooSmall, RhsRejected };

inline const char* to_string(IntegrationStatus s) {
  switch (s) {
    case IntegrationStatus::Success: return "success";
    case IntegrationStatus::MaxStepsExceeded: return "max steps exceeded";
    case IntegrationStatus::StepTooSmall: return "step size underflow";
    case IntegrationStatus::RhsRejected: return "right-hand side rejected the state";
  }
  return "unknown";
}

template <int N>
struct IntegrationResult {
  using Vector = Eigen::Matrix<double, N, 1>;
  Vector y;
  double t = 0.0;
  IntegrationStatus status = IntegrationStatus::Success;
  long steps = 0;
  long rejected_steps = 0;
  long rhs_evals = 0;
  std::string message;
  std::vector<Vector> samples;  // one per requested sample time

  bool ok() const { return status == IntegrationStatus::Success; }
};

namespace detail {

template <int N>
double rms_norm(const Eigen::Matrix<double, N, 1>& x) {
  return std::sqrt(x.squaredNorm() / static_cast<double>(x.size()));
}

}  // namespace detail

/// Integrates dy/dt = rhs(t, y) from t0 to tf (tf >= t0). `rhs` has signature
/// void(double t, const Vector& y, Vector& dydt) and may throw to reject a state.
/// If `sample_times` is non-empty (ascending, inside [t0, tf]) the 7th-order dense
/// output is evaluated there.
template <int N, typename Rhs>
IntegrationResult<N> integrate(Rhs&& rhs, const Eigen::Matrix<double, N, 1>& y0, double t0,
                               double tf, const IntegratorConfig& cfg,
                               std::span<const double> sample_times = {}) {
  using Vector = Eigen::Matrix<double, N, 1>;
  namespace tab = dop853;
  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 10.0;
  constexpr double kErrorExponent = -1.0 / 8.0;

  cfg.validate();
  if (!(tf >= t0)) throw std::invalid_argument("integrate: tf must not precede t0");

  IntegrationResult<N> res;
  res.y = y0;
  res.t = t0;
  res.samples.reserve(sample_times.size());
  std::size_t next_sample = 0;
  while (next_sample < sample_times.size() && sample_times[next_sample] <= t0) {
    res.samples.push_back(y0);
    ++next_sample;
  }
  if (tf == t0) {
    while (next_sample++ < sample_times.size()) res.samples.push_back(y0);
    return res;
  }

  Vector K[tab::kStagesExtended];
  Vector y = y0;
  Vector f;
  double t = t0;

  auto eval = [&](double tt, const Vector& yy, Vector& out) -> bool {
    ++res.rhs_evals;
    try {
      rhs(tt, yy, out);
    } catch (const std::exception& e) {
      res.status = IntegrationStatus::RhsRejected;
      res.message = e.what();
      return false;
    }
    return true;
  };

  if (!eval(t, y, f)) return res;

  const double span_len = tf - t0;
  double h_abs = cfg.initial_step;
  if (h_abs <= 0.0) {
    // Hairer's starting-step heuristic.
    const Vector scale = (cfg.abs_tol + y.array().abs() * cfg.rel_tol).matrix();
    const double d0 = detail::rms_norm<N>((y.array() / scale.array()).matrix());
    const double d1 = detail::rms_norm<N>((f.array() / scale.array()).matrix());
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, span_len);
    Vector f1;
    if (!eval(t + h0, y + h0 * f, f1)) return res;
    const double d2 = detail::rms_norm<N>(((f1 - f).array() / scale.array()).matrix()) / h0;
    const double h1 = (d1 <= 1e-15 && d2 <= 1e-15) ? std::max(1e-6, h0 * 1e-3)
                                                     : std::pow(0.01 / std::max(d1, d2), 1.0 / 8.0);
    h_abs = std::min({100.0 * h0, h1, span_len});
  }

  Vector y_new;
  Vector f_new;
  Vector dy;
  while (t < tf) {
    if (res.steps >= cfg.max_steps) {
      res.status = IntegrationStatus::MaxStepsExceeded;
      res.message = "max steps exceeded";
      break;
    }
    const double min_step =
        10.0 * std::abs(std::nextafter(t, std::numeric_limits<double>::infinity()) - t);
    bool accepted = false;
    bool rejected = false;
    std::string rhs_error;  // last rhs failure while retrying this step
    double h = 0.0;
    double t_new = t;
    // A trial state the rhs refuses is treated like a failed error test.
    auto reject_trial = [&] {
      rhs_error = res.message;
      res.status = IntegrationStatus::Success;
      res.message.clear();
      h_abs *= kMinFactor;
      rejected = true;
      ++res.rejected_steps;
    };
    while (!accepted) {
      if (h_abs < min_step) {
        if (rhs_error.empty()) {
          res.status = IntegrationStatus::StepTooSmall;
          res.message = "step size underflow";
        } else {
          res.status = IntegrationStatus::RhsRejected;
          res.message = rhs_error;
        }
        res.y = y;
        res.t = t;
        return res;
      }
      t_new = t + h_abs;
      if (t_new > tf) t_new = tf;
      h = t_new - t;
      h_abs = h;

      K[0] = f;
      bool stages_ok = true;
      for (int s = 1; s < tab::kStages && stages_ok; ++s) {
        dy.setZero(y.size());
        for (int j = 0; j < s; ++j) {
          if (tab::A[s][j] != 0.0) dy += tab::A[s][j] * K[j];
        }
        stages_ok = eval(t + tab::C[s] * h, y + h * dy, K[s]);
      }
      if (!stages_ok) {
        reject_trial();
        continue;
      }
      dy.setZero(y.size());
      for (int j = 0; j < tab::kStages; ++j) {
        if (tab::A[tab::kStages][j] != 0.0) dy += tab::A[tab::kStages][j] * K[j];
      }
      y_new = y + h * dy;
      if (!eval(t_new, y_new, f_new)) {
        reject_trial();
        continue;
      }
      K[tab::kStages] = f_new;

      const Vector scale =
          (cfg.abs_tol + y.array().abs().max(y_new.array().abs()) * cfg.rel_tol).matrix();
      Vector err5 = Vector::Zero(y.size());
      Vector err3 = Vector::Zero(y.size());
      for (int j = 0; j <= tab::kStages; ++j) {
        const double e3 = (j < tab::kStages ? tab::A[tab::kStages][j] : 0.0) + tab::E3_DELTA[j];
        if (tab::E5[j] != 0.0) err5 += tab::E5[j] * K[j];
        if (e3 != 0.0) err3 += e3 * K[j];
      }
      const double e5n = (err5.array() / scale.array()).matrix().squaredNorm();
      const double e3n = (err3.array() / scale.array()).matrix().squaredNorm();
      double error_norm = 0.0;
      if (e5n != 0.0 || e3n != 0.0) {
        error_norm = h * e5n / std::sqrt((e5n + 0.01 * e3n) * static_cast<double>(y.size()));
      }

      if (std::isfinite(error_norm) && error_norm < 1.0) {
        double factor = error_norm == 0.0
                            ? kMaxFactor
                            : std::min(kMaxFactor, kSafety * std::pow(error_norm, kErrorExponent));
        if (rejected) factor = std::min(1.0, factor);
        h_abs *= factor;
        accepted = true;
      } else {
        const double shrink =
            std::isfinite(error_norm) ? kSafety * std::pow(error_norm, kErrorExponent) : kMinFactor;
        h_abs *= std::max(kMinFactor, shrink);
        rejected = true;
        ++res.rejected_steps;
      }
    }

    // Dense output for any sample times inside (t, t_new].
    if (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
      for (int s = tab::kStages + 1; s < tab::kStagesExtended; ++s) {
        dy.setZero(y.size());
        for (int j = 0; j < s; ++j) {
          if (tab::A[s][j] != 0.0) dy += tab::A[s][j] * K[j];
        }
        if (!eval(t + tab::C[s] * h, y + h * dy, K[s])) {
          res.y = y;
          res.t = t;
          return res;
        }
      }
      Vector F[7];
      const Vector delta_y = y_new - y;
      F[0] = delta_y;
      F[1] = h * f - delta_y;
      F[2] = 2.0 * delta_y - h * (f_new + f);
      for (int i = 0; i < 4; ++i) {
        F[3 + i].setZero(y.size());
        for (int j = 0; j < tab::kStagesExtended; ++j) {
          if (tab::D[i][j] != 0.0) F[3 + i] += tab::D[i][j] * K[j];
        }
        F[3 + i] *= h;
      }
      while (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
        const double x = (sample_times[next_sample] - t) / h;
        Vector acc = Vector::Zero(y.size());
        for (int i = 0; i < 7; ++i) {
          acc += F[6 - i];
          acc *= (i % 2 == 0) ? x : (1.0 - x);
        }
        res.samples.push_back(y + acc);
        ++next_sample;
      }
    }

    t = t_new;
    y = y_new;
    f = f_new;
    ++res.steps;
  }

  res.y = y;
  res.t = t;
  if (res.ok()) {
    while (next_sample++ < sample_times.size()) res.samples.push_back(y);
  }
  return res;
}

}  // namespace mintraj
