#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"
#include "mintraj/benchmarks.hpp"
#include "mintraj/monte_carlo.hpp"
#include "mintraj/report_io.hpp"
#include "support.hpp"

using namespace mintraj;
namespace fs = std::filesystem;

namespace {

constexpr double kAu = 1.496e8;  // km
constexpr double kYear = 3.1536e7;  // s

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream ss(text);
  for (std::string line; std::getline(ss, line);) out.push_back(line);
  return out;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MINTRAJ_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("mintraj_bench_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

MonteCarloOptions quick_options() {
  MonteCarloOptions opt;
  opt.sample_points = 400;
  return opt;
}

}  // namespace

TEST_CASE("Earth-to-Mars data") {
  const BenchmarkData& d = benchmark_data(BenchmarkId::EarthToMars);
  CHECK(d.m0 == 1000.0);
  CHECK(d.isp == 2000.0);
  CHECK(d.t_max == 0.5);
  CHECK(d.tof_days == 348.795);
  CHECK(d.r0 == Vec3(-140699693.0, -51614428.0, 980.0));
  CHECK(d.v0 == Vec3(9.774596, -28.07828, 4.337725e-4));
  CHECK(d.mee_revolutions == 0);

  const ShootingProblem p = load_benchmark(BenchmarkId::EarthToMars, Coordinates::Cartesian);
  CHECK(p.tof == doctest::Approx(0.9556027397260274).epsilon(1e-15));
  CHECK(p.initial_mass == 1.0);
  CHECK((p.initial_state.head<3>() * kAu - d.r0).norm() < 1e-6);
  CHECK((p.initial_state.tail<3>() * kAu / kYear - d.v0).norm() < 1e-12);
  CHECK((p.target.head<3>() * kAu - d.rf).norm() < 1e-6);
  CHECK(p.n_rev == 0);
}

TEST_CASE("Earth-to-Dionysus data") {
  const BenchmarkData& d = benchmark_data(BenchmarkId::EarthToDionysus);
  CHECK(d.m0 == 4000.0);
  CHECK(d.isp == 3000.0);
  CHECK(d.t_max == 0.32);
  CHECK(d.tof_days == 3534.0);
  CHECK(d.rf == Vec3(-302452014.884, 316097179.632, 82872290.0755));
  CHECK(d.vf == Vec3(-4.533473, -13.110309, 0.656163));

  const ShootingProblem mee = load_benchmark(BenchmarkId::EarthToDionysus, Coordinates::Mee);
  CHECK(mee.n_rev == 5);
  CHECK(mee.model.mu == 1.0);
  CHECK(mee.tof * mee.scale.time_unit == doctest::Approx(3534.0 * 86400.0).epsilon(1e-14));
  const ShootingProblem cart = load_benchmark(BenchmarkId::EarthToDionysus, Coordinates::Cartesian);
  CHECK(cart.n_rev == 0);
  CHECK(cart.tof == doctest::Approx(3534.0 * 86400.0 / kYear).epsilon(1e-14));
}

TEST_CASE("names") {
  CHECK(parse_benchmark("e2m") == BenchmarkId::EarthToMars);
  CHECK(to_string(BenchmarkId::EarthToDionysus) == "e2d");
  CHECK_THROWS_AS(parse_benchmark("e2v"), std::invalid_argument);
}

TEST_CASE("costate sampler ranges and reproducibility") {
  for (int i = 0; i < 500; ++i) {
    const Vec7 cart = sample_costates(Coordinates::Cartesian, 42, i);
    const Vec7 mee = sample_costates(Coordinates::Mee, 42, i);
    for (int j = 0; j < 7; ++j) {
      CHECK(cart[j] >= 0.0);
      CHECK(cart[j] <= 1.0);
    }
    for (int j = 0; j < 6; ++j) {
      CHECK(mee[j] >= 0.0);
      CHECK(mee[j] <= 0.1);
      CHECK(mee[j] == doctest::Approx(0.1 * cart[j]).epsilon(1e-15));
    }
    CHECK(mee[6] == cart[6]);
    CHECK(sample_costates(Coordinates::Cartesian, 42, i) == cart);
  }
  CHECK(sample_costates(Coordinates::Cartesian, 1, 0) != sample_costates(Coordinates::Cartesian, 2, 0));
  CHECK(sample_costates(Coordinates::Cartesian, 1, 0) != sample_costates(Coordinates::Cartesian, 1, 1));
  // Row of uniform means close to one half over many draws.
  double sum = 0.0;
  for (int i = 0; i < 2000; ++i) sum += sample_costates(Coordinates::Cartesian, 9, i).sum();
  CHECK(sum / (2000.0 * 7.0) == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("default Monte Carlo cells") {
  const auto cells = default_cells();
  REQUIRE(cells.size() == 8);
  const SmoothingKind kinds[] = {SmoothingKind::HyperbolicTangent, SmoothingKind::L2Norm};
  const Coordinates coords[] = {Coordinates::Cartesian, Coordinates::Mee};
  int k = 0;
  for (const Coordinates c : coords) {
    for (const SmoothingKind s : kinds) {
      for (const bool stm : {true, false}) {
        CHECK(cells[k].coords == c);
        CHECK(cells[k].smoothing == s);
        CHECK(cells[k].use_stm == stm);
        ++k;
      }
    }
  }
}

TEST_CASE("one converging trial gives full convergence") {
  const MonteCarloCell cell{SmoothingKind::L2Norm, Coordinates::Cartesian, true};
  std::uint64_t seed = 0;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    if (run_trial(BenchmarkId::EarthToMars, cell, s, 0, quick_options()).converged) {
      seed = s;
      break;
    }
  }
  REQUIRE(seed != 0);
  const MonteCarloReport rep = run_monte_carlo(BenchmarkId::EarthToMars, 1, seed, {cell}, quick_options());
  REQUIRE(rep.cells.size() == 1);
  CHECK(rep.cells[0].convergence_percent() == 100.0);
  CHECK(rep.cells[0].converged_count() == 1);
  CHECK(rep.cells[0].trials[0].revolutions == 0);
  CHECK(rep.seed == seed);
}

TEST_CASE("parallel Monte Carlo matches the serial reference bit for bit") {
  const std::vector<MonteCarloCell> cells = {{SmoothingKind::HyperbolicTangent, Coordinates::Cartesian, true},
                                            {SmoothingKind::L2Norm, Coordinates::Mee, false}};
  MonteCarloOptions opt = quick_options();
  opt.threads = 4;
  const MonteCarloReport par = run_monte_carlo(BenchmarkId::EarthToMars, 3, 5, cells, opt);
  const MonteCarloReport ser = run_monte_carlo_serial(BenchmarkId::EarthToMars, 3, 5, cells, opt);
  CHECK(monte_carlo_trials_csv(par, false) == monte_carlo_trials_csv(ser, false));
  CHECK(monte_carlo_csv(par, false) == monte_carlo_csv(ser, false));
  REQUIRE(par.cells.size() == 2);
  for (std::size_t c = 0; c < 2; ++c) {
    REQUIRE(par.cells[c].trials.size() == 3);
    for (int t = 0; t < 3; ++t) {
      const TrialResult& a = par.cells[c].trials[t];
      const TrialResult& b = ser.cells[c].trials[t];
      CHECK(a.index == t);
      CHECK(std::memcmp(a.eta0.data(), b.eta0.data(), sizeof(double) * 7) == 0);
      CHECK(std::memcmp(&a.final_mass_kg, &b.final_mass_kg, sizeof(double)) == 0);
      CHECK(a.iterations == b.iterations);
    }
  }
}

TEST_CASE("converged Earth-to-Mars trials share one extremal and meet the boundary") {
  const MonteCarloCell cell{SmoothingKind::HyperbolicTangent, Coordinates::Cartesian, true};
  const MonteCarloReport rep = run_monte_carlo(BenchmarkId::EarthToMars, 8, 3, {cell}, quick_options());
  const ShootingProblem p = load_benchmark(BenchmarkId::EarthToMars, Coordinates::Cartesian);
  std::vector<double> masses;
  for (const TrialResult& t : rep.cells[0].trials) {
    if (!t.converged) continue;
    masses.push_back(t.final_mass_kg);
    CHECK(t.eta0[6] >= 0.0);
    const TerminalState fin = propagate_to_final(p, t.eta0, 1e-5);
    REQUIRE(fin.ok);
    const TerminalError miss = terminal_error(p, fin.z);
    CHECK(miss.position_km < 1.0);
    CHECK(miss.velocity_kms < 1e-6);
    CHECK(std::abs(fin.z[13]) < RootSolveConfig{}.residual_tol);
  }
  REQUIRE(masses.size() >= 2);
  const auto [lo, hi] = std::minmax_element(masses.begin(), masses.end());
  CHECK(*hi - *lo < 1.0);
  MESSAGE(masses.size() << " of 8 converged; mass spread " << *hi - *lo << " kg");
}

TEST_CASE("terminal error is the redimensionalized miss") {
  const ShootingProblem p = load_benchmark(BenchmarkId::EarthToMars, Coordinates::Mee);
  Vec14 z = Vec14::Zero();
  z.head<6>() = p.target;
  z[5] += 2.0 * M_PI * p.n_rev;
  z[6] = 0.5;
  const TerminalError exact = terminal_error(p, z);
  CHECK(exact.position_km < 1e-4);
  CHECK(exact.velocity_kms < 1e-10);
  const ShootingProblem c = load_benchmark(BenchmarkId::EarthToMars, Coordinates::Cartesian);
  z.head<6>() = c.target;
  z[0] += 1.0 / kAu;
  z[4] += 1e-3 / kAu * kYear;
  const TerminalError miss = terminal_error(c, z);
  CHECK(miss.position_km == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(miss.velocity_kms == doctest::Approx(1e-3).epsilon(1e-6));
}

TEST_CASE("report formats") {
  const std::vector<MonteCarloCell> cells = {{SmoothingKind::L2Norm, Coordinates::Cartesian, true}};
  const MonteCarloReport rep = run_monte_carlo(BenchmarkId::EarthToMars, 2, 7, cells, quick_options());

  const auto summary = lines_of(monte_carlo_csv(rep, false));
  REQUIRE(summary.size() == 2);
  CHECK(summary[0] == "smoothing,coords,stm,trials,converged,convergence_pct,seed");
  CHECK(summary[1].rfind("l2,cartesian,true,2,", 0) == 0);
  CHECK(lines_of(monte_carlo_csv(rep, true))[0].find("mean_time_all_s") != std::string::npos);

  const auto trials = lines_of(monte_carlo_trials_csv(rep, false));
  CHECK(trials.size() == 3);
  CHECK(trials[0].find("eta0_6") != std::string::npos);

  const nlohmann::json j = to_json(rep, false);
  CHECK(j.at("problem") == "e2m");
  CHECK(j.at("seed") == 7);
  CHECK(j.at("trials") == 2);
  CHECK(j.dump().find("wall_time") == std::string::npos);

  SolutionRecord rec;
  rec.seed = 7;
  rec.smoothing = SmoothingKind::L2Norm;
  const ShootingProblem p = load_benchmark(BenchmarkId::EarthToMars, Coordinates::Cartesian, rec.smoothing);
  rec.report = solve_with_continuation(p, sample_costates(Coordinates::Cartesian, 7, 0), rec.schedule,
                                       RootSolveConfig{});
  const nlohmann::json sj = to_json(rec, false);
  for (const char* key : {"problem", "coords", "smoothing", "rho_final", "eta0", "final_mass_kg",
                          "residual_inf_norm", "rho_ladder", "seed"}) {
    CHECK(sj.contains(key));
  }
  for (const auto& stage : sj.at("rho_ladder")) {
    CHECK(stage.contains("rho"));
    CHECK(stage.contains("iterations"));
    CHECK(stage.contains("residual"));
  }
  const SolutionRecord back = solution_from_json(nlohmann::json::parse(sj.dump()));
  CHECK(back.report.eta0 == rec.report.eta0);
  CHECK(back.report.final_mass_kg == rec.report.final_mass_kg);
  CHECK(back.schedule.rho_final == rec.schedule.rho_final);
  CHECK(back.smoothing == SmoothingKind::L2Norm);

  const auto samples = sample_solution(p, rec.report.eta0, 1e-5, 5);
  const auto rows = lines_of(samples_csv(samples));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] ==
        "t,x,y,z,vx,vy,vz,m,lam1,lam2,lam3,lam4,lam5,lam6,lam_m,alpha_x,alpha_y,alpha_z,H,S,delta");
  CHECK(std::count(rows[1].begin(), rows[1].end(), ',') == 20);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("command line") {
  const fs::path dir = scratch_dir();
  const fs::path sol = dir / "sol.json";
  const fs::path mc = dir / "mc.csv";
  const fs::path samples = dir / "samples.csv";

  CHECK(run_cli("solve --problem e2m --coords cartesian --smoothing l2 --stm --seed 7 --out " +
                sol.string()) == 0);
  const nlohmann::json j = nlohmann::json::parse(read_file(sol));
  CHECK(j.at("converged") == true);
  CHECK(j.at("final_mass_kg").get<double>() == doctest::Approx(603.935).epsilon(0.5 / 603.935));
  CHECK(j.at("seed") == 7);

  CHECK(run_cli("sample --solution " + sol.string() + " --points 2000 --out " + samples.string()) == 0);
  const auto rows = lines_of(read_file(samples));
  REQUIRE(rows.size() == 2001);
  CHECK(rows[0].rfind("t,x,y,z,vx,vy,vz,m,", 0) == 0);
  CHECK(rows[0].size() >= 7);
  CHECK(rows[0].substr(rows[0].size() - 7) == "S,delta");

  CHECK(run_cli("montecarlo --problem e2m --trials 1 --seed 1 --out " + mc.string()) == 0);
  const auto mc_rows = lines_of(read_file(mc));
  CHECK(mc_rows.size() == 9);

  CHECK(run_cli("solve --problem e2x") == 2);
  CHECK(run_cli("montecarlo --trials 0") == 2);
  CHECK(run_cli("solve --rho-factor 2") == 2);
  CHECK(run_cli("sample --solution " + (dir / "missing.json").string()) == 2);
  CHECK(run_cli("") == 2);
  CHECK(run_cli("solve --problem e2m --max-iters 1 --attempts 1 --out " + (dir / "fail.json").string()) == 1);

  fs::remove_all(dir);
}
