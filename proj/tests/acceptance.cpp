// End-to-end acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "mintraj/benchmarks.hpp"
#include "mintraj/monte_carlo.hpp"

using namespace mintraj;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void note(const std::string& text) {
  std::printf("  %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

struct Solved {
  ShootingProblem problem;
  SolveReport report;
  int trial = -1;
};

Solved first_converging(BenchmarkId id, Coordinates coords, SmoothingKind kind, int attempts) {
  Solved s;
  s.problem = load_benchmark(id, coords, kind, true);
  for (int t = 0; t < attempts; ++t) {
    s.report = solve_with_continuation(s.problem, sample_costates(coords, 1, t), ContinuationSchedule{},
                                       RootSolveConfig{});
    if (s.report.converged) {
      s.trial = t;
      break;
    }
  }
  return s;
}

/// lambda_m(t0) >= 0 and lambda_m(tf) within residual_tol; false when propagation fails.
bool mass_costate_ok(const ShootingProblem& p, const Vec7& eta0, double rho) {
  const TerminalState fin = propagate_to_final(p, eta0, rho);
  return fin.ok && eta0[6] >= 0.0 && std::abs(fin.z[13]) < RootSolveConfig{}.residual_tol;
}

int run_command(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  int mass_costate_violations = 0;
  int mass_costate_checked = 0;
  auto check_mass_costate = [&](const ShootingProblem& p, const Vec7& eta0) {
    ++mass_costate_checked;
    if (!mass_costate_ok(p, eta0, 1e-5)) ++mass_costate_violations;
  };

  // 1. Earth-to-Mars optimum.
  const Solved e2m = first_converging(BenchmarkId::EarthToMars, Coordinates::Cartesian,
                                      SmoothingKind::HyperbolicTangent, 20);
  {
    bool pass = e2m.report.converged;
    if (pass) {
      const TerminalState fin = propagate_to_final(e2m.problem, e2m.report.eta0, 1e-5);
      const TerminalError miss = terminal_error(e2m.problem, fin.z);
      note(fmt("E2M cartesian/tanh final mass %.4f kg, miss %.3g km, %.3g km/s", e2m.report.final_mass_kg,
                 miss.position_km, miss.velocity_kms));
      pass = fin.ok && std::abs(e2m.report.final_mass_kg - 603.935) <= 0.5 && miss.position_km < 1.0 &&
             miss.velocity_kms < 1e-6;
      check_mass_costate(e2m.problem, e2m.report.eta0);
    }
    report(1, pass, "Earth-to-Mars final mass 603.935 +/- 0.5 kg, miss < 1 km and < 1e-6 km/s");
  }

  // 2. Earth-to-Dionysus optimum in MEE with five revolutions.
  {
    const Solved e2d = first_converging(BenchmarkId::EarthToDionysus, Coordinates::Mee,
                                        SmoothingKind::HyperbolicTangent, 20);
    bool pass = e2d.report.converged && e2d.problem.n_rev == 5;
    if (e2d.report.converged) {
      note(fmt("E2D mee/tanh trial %.0f final mass %.4f kg, %.1f s", e2d.trial, e2d.report.final_mass_kg,
                 e2d.report.wall_time));
      pass = pass && std::abs(e2d.report.final_mass_kg - 2718.33) <= 1.0;
      check_mass_costate(e2d.problem, e2d.report.eta0);
    }
    report(2, pass, "Earth-to-Dionysus MEE, N_rev = 5, final mass 2718.33 +/- 1.0 kg");
  }

  // 3. Throttle structure of the Earth-to-Mars solution.
  {
    bool pass = false;
    if (e2m.report.converged) {
      const auto samples = sample_solution(e2m.problem, e2m.report.eta0, 1e-5, 20001);
      int crossings = 0;
      std::string times;
      for (std::size_t i = 1; i < samples.size(); ++i) {
        if ((samples[i].delta > 0.5) != (samples[i - 1].delta > 0.5)) {
          ++crossings;
          times += fmt(" %.4f", samples[i].t);
        }
      }
      note(fmt("delta crosses 0.5 %.0f times, at t (TU) =", crossings) + times);
      pass = crossings == 2;
    }
    report(3, pass, "Earth-to-Mars throttle has two thrust arcs around one coast arc");
  }

  // 4. STM benefit and MEE advantage on Earth-to-Dionysus.
  {
    const int trials = 100;
    std::vector<MonteCarloCell> cells;
    for (const MonteCarloCell& c : default_cells()) {
      if (c.smoothing == SmoothingKind::HyperbolicTangent) cells.push_back(c);
    }
    const MonteCarloReport rep = run_monte_carlo(BenchmarkId::EarthToDionysus, trials, 1, cells, {});
    auto pct = [&](Coordinates coords, bool stm) {
      for (const CellReport& c : rep.cells) {
        if (c.cell.coords == coords && c.cell.use_stm == stm) return c.convergence_percent();
      }
      return -1.0;
    };
    for (const CellReport& c : rep.cells) {
      note(std::string(to_string(c.cell.coords)) + (c.cell.use_stm ? " stm   " : " no-stm") +
             fmt(" %5.1f %% converged, mean %.2f s per trial", c.convergence_percent(), c.mean_time_all()));
      const ShootingProblem p = load_benchmark(BenchmarkId::EarthToDionysus, c.cell.coords, c.cell.smoothing,
                                               c.cell.use_stm);
      for (const TrialResult& t : c.trials) {
        if (t.converged) check_mass_costate(p, t.eta0);
      }
    }
    const double cs = pct(Coordinates::Cartesian, true), cf = pct(Coordinates::Cartesian, false);
    const double ms = pct(Coordinates::Mee, true), mf = pct(Coordinates::Mee, false);
    const bool stm_cart = cs > cf;
    const bool stm_mee = ms > mf;
    const bool mee_stm = ms > cs;
    const bool mee_fd = mf > cf;
    note(std::string("STM > FD: cartesian ") + (stm_cart ? "yes" : "no") + ", mee " + (stm_mee ? "yes" : "no") + "; MEE > cartesian: stm " +
           (mee_stm ? "yes" : "no") + ", fd " + (mee_fd ? "yes" : "no"));
    note("reference pattern (tanh): cartesian 34 vs 3, mee 70 vs 36");
    report(4, stm_cart && stm_mee && mee_stm && mee_fd,
           "E2D convergence: STM above FD for both coordinate sets, MEE above cartesian (100 trials, tanh)");
  }

  // 5. Continuation consistency.
  {
    bool pass = false;
    if (e2m.report.converged) {
      const auto& st = e2m.report.stages;
      const double diff = std::abs(st[st.size() - 2].final_mass_kg - st.back().final_mass_kg);
      note(fmt("|m(1e-4) - m(1e-5)| = %.3g kg", diff));
      note(fmt("stages at rho %.0e and %.0e", st[st.size() - 2].rho, st.back().rho));
      pass = std::abs(st[st.size() - 2].rho / 1e-4 - 1.0) < 1e-9 && diff < 0.2;
    }
    report(5, pass, "Earth-to-Mars |m(1e-4) - m(1e-5)| < 0.2 kg");
  }

  // 6. Property suites, plus the mass-costate signs on every converged solve above.
  {
    bool pass = true;
    for (const char* suite : MINTRAJ_PROPERTY_SUITES) {
      const int rc = run_command(std::string(suite) + " >/dev/null 2>&1");
      note(std::string(fs::path(suite).filename()) + (rc == 0 ? " passed" : " FAILED"));
      pass = pass && rc == 0;
    }
    note(fmt("lambda_m(t0) >= 0 and lambda_m(tf) = 0 on %.0f of %.0f converged solves",
               mass_costate_checked - mass_costate_violations, mass_costate_checked));
    pass = pass && mass_costate_violations == 0;
    report(6, pass, "property suites and mass-costate conditions");
  }

  // 7. Determinism of the Monte Carlo command.
  {
    const fs::path dir = fs::temp_directory_path() / ("mintraj_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string base = std::string(MINTRAJ_CLI_PATH) + " montecarlo --problem e2m --seed 1 --trials 10";
    const fs::path a = dir / "a.csv", b = dir / "b.csv";
    const int ra = run_command(base + " --out " + a.string() + " >/dev/null 2>&1");
    const int rb = run_command(base + " --out " + b.string() + " >/dev/null 2>&1");
    const std::string ta = read_file(a), tb = read_file(b);
    note(fmt("exit codes %.0f and %.0f, %.0f bytes", ra, rb, static_cast<double>(ta.size())));
    report(7, ra == 0 && rb == 0 && !ta.empty() && ta == tb, "two montecarlo --seed 1 --trials 10 runs are byte-identical");
    fs::remove_all(dir);
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
