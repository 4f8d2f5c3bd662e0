#include "mintraj/benchmarks.hpp"

#include <stdexcept>
#include <string>

#include "mintraj/dyn_mee.hpp"

namespace mintraj {

namespace {

BenchmarkData make_e2m() {
  BenchmarkData d;
  d.id = BenchmarkId::EarthToMars;
  d.m0 = 1000.0;
  d.isp = 2000.0;
  d.t_max = 0.5;
  d.tof_days = 348.795;
  d.r0 = {-140699693.0, -51614428.0, 980.0};
  d.v0 = {9.774596, -28.07828, 4.337725e-4};
  d.rf = {-172682023.0, 176959469.0, 7948912.0};
  d.vf = {-16.427384, -14.860506, 9.21486e-2};
  d.mee_revolutions = 0;
  return d;
}

BenchmarkData make_e2d() {
  BenchmarkData d;
  d.id = BenchmarkId::EarthToDionysus;
  d.m0 = 4000.0;
  d.isp = 3000.0;
  d.t_max = 0.32;
  d.tof_days = 3534.0;
  d.r0 = {-3637871.081, 147099798.784, -2261.441};
  d.v0 = {-30.265097, -0.8486854, 0.505e-4};
  d.rf = {-302452014.884, 316097179.632, 82872290.0755};
  d.vf = {-4.533473, -13.110309, 0.656163};
  d.mee_revolutions = 5;
  return d;
}

}  // namespace

std::string_view to_string(BenchmarkId id) {
  return id == BenchmarkId::EarthToMars ? "e2m" : "e2d";
}

BenchmarkId parse_benchmark(std::string_view name) {
  if (name == "e2m") return BenchmarkId::EarthToMars;
  if (name == "e2d") return BenchmarkId::EarthToDionysus;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

const BenchmarkData& benchmark_data(BenchmarkId id) {
  static const BenchmarkData e2m = make_e2m();
  static const BenchmarkData e2d = make_e2d();
  return id == BenchmarkId::EarthToMars ? e2m : e2d;
}

ShootingProblem load_benchmark(BenchmarkId id, Coordinates coords, SmoothingKind smoothing,
                               bool use_stm) {
  const BenchmarkData& d = benchmark_data(id);
  ShootingProblem p;
  p.name = std::string(to_string(id));
  p.coords = coords;
  p.params = SpacecraftParams::make(d.m0, d.isp, d.t_max, kMuSun);
  p.smoothing = {smoothing, 1.0};
  p.use_stm = use_stm;

  switch (coords) {
    case Coordinates::Cartesian:
      p.scale = make_heliocentric_scale(d.m0, kMuSun);
      break;
    case Coordinates::Mee:
      p.scale = make_mu_one_scale(kMuSun, kAstronomicalUnit, d.m0);
      p.n_rev = d.mee_revolutions;
      break;
    case Coordinates::Cr3bp:
      throw std::invalid_argument("benchmarks are heliocentric two-body problems");
  }
  p.model = to_canonical(p.params, p.scale);
  p.tof = d.tof_days * kSecondsPerDay / p.scale.time_unit;

  const CartesianState s0 = nondimensionalize({d.r0, d.v0, d.m0}, p.scale);
  const CartesianState sf = nondimensionalize({d.rf, d.vf, d.m0}, p.scale);
  p.initial_mass = s0.m;
  if (coords == Coordinates::Cartesian) {
    p.initial_state << s0.r, s0.v;
    p.target << sf.r, sf.v;
  } else {
    p.initial_state = cartesian_to_mee(s0.r, s0.v, 1.0).to_vector();
    p.target = cartesian_to_mee(sf.r, sf.v, 1.0).to_vector();
  }
  p.validate();
  return p;
}

TerminalError terminal_error(const ShootingProblem& problem, const Vec14& zf) {
  Vec3 r;
  Vec3 v;
  Vec3 rt;
  Vec3 vt;
  if (problem.coords == Coordinates::Mee) {
    mee_to_cartesian(MeeElements::from_vector(zf.head<6>()), 1.0, r, v);
    mee_to_cartesian(MeeElements::from_vector(problem.target), 1.0, rt, vt);
  } else {
    r = zf.segment<3>(0);
    v = zf.segment<3>(3);
    rt = problem.target.head<3>();
    vt = problem.target.tail<3>();
  }
  return {(r - rt).norm() * problem.scale.length_unit,
          (v - vt).norm() * problem.scale.velocity_unit()};
}

}  // namespace mintraj
