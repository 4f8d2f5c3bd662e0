// Command-line front end: solve, montecarlo, sample.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mintraj/report_io.hpp"

namespace {

using namespace mintraj;

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitNumeric = 3;

struct CommonOptions {
  std::string problem = "e2m";
  double rho_init = 1.0;
  double rho_factor = 0.1;
  double rho_final = 1e-5;
  double rel_tol = 1e-13;
  double abs_tol = 1e-13;
  double residual_tol = 1e-9;
  int max_iters = 200;
  std::uint64_t seed = 1;
  std::string out;
  std::string format;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--problem", o.problem, "Benchmark problem")
      ->check(CLI::IsMember({"e2m", "e2d"}))
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for the costate guesses")->capture_default_str();
  cmd->add_option("--rho-init", o.rho_init, "First smoothing parameter")->capture_default_str();
  cmd->add_option("--rho-factor", o.rho_factor, "Ratio between successive stages")
      ->capture_default_str();
  cmd->add_option("--rho-final", o.rho_final, "Last smoothing parameter")->capture_default_str();
  cmd->add_option("--rel-tol", o.rel_tol, "Integrator relative tolerance")->capture_default_str();
  cmd->add_option("--abs-tol", o.abs_tol, "Integrator absolute tolerance")->capture_default_str();
  cmd->add_option("--residual-tol", o.residual_tol, "Shooting residual tolerance (canonical units)")
      ->capture_default_str();
  cmd->add_option("--max-iters", o.max_iters, "Root-finder trial steps per stage")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output file (stdout when omitted)");
  cmd->add_flag("--timing", o.timing, "Include wall times in the output file");
}

MonteCarloOptions make_options(const CommonOptions& o) {
  MonteCarloOptions opt;
  opt.schedule = {o.rho_init, o.rho_factor, o.rho_final};
  opt.schedule.validate();
  opt.root.residual_tol = o.residual_tol;
  opt.root.max_iters = o.max_iters;
  opt.root.validate();
  opt.integrator.rel_tol = o.rel_tol;
  opt.integrator.abs_tol = o.abs_tol;
  opt.integrator.validate();
  return opt;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

Vec7 parse_eta(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(std::stod(item));
  if (vals.size() != 7) throw std::invalid_argument("--eta0 needs 7 comma-separated values");
  return Eigen::Map<const Vec7>(vals.data());
}

std::string solve_csv(const SolutionRecord& rec, bool timing) {
  std::ostringstream os;
  os << "problem,coords,smoothing,stm,converged,final_mass_kg,residual_inf_norm,seed,trial";
  for (int i = 0; i < 7; ++i) os << ",eta0_" << i;
  if (timing) os << ",wall_time_s";
  os << '\n'
     << to_string(rec.problem) << ',' << to_string(rec.coords) << ',' << to_string(rec.smoothing)
     << ',' << (rec.use_stm ? "true" : "false") << ',' << (rec.report.converged ? 1 : 0) << ','
     << format_double(rec.report.final_mass_kg) << ',' << format_double(rec.report.residual_inf_norm)
     << ',' << rec.seed << ',' << rec.trial;
  for (int i = 0; i < 7; ++i) os << ',' << format_double(rec.report.eta0[i]);
  if (timing) os << ',' << format_double(rec.report.wall_time);
  os << '\n';
  return os.str();
}

int run_solve(const CommonOptions& o, const std::string& coords, const std::string& smoothing,
              bool stm, int attempts, const std::string& eta_text) {
  const MonteCarloOptions opt = make_options(o);
  const BenchmarkId id = parse_benchmark(o.problem);
  const Coordinates c = parse_coordinates(coords);
  const SmoothingKind k = parse_smoothing(smoothing);
  ShootingProblem problem = load_benchmark(id, c, k, stm);
  problem.integrator = opt.integrator;

  SolutionRecord rec;
  rec.problem = id;
  rec.coords = c;
  rec.smoothing = k;
  rec.use_stm = stm;
  rec.seed = o.seed;
  rec.rel_tol = o.rel_tol;
  rec.abs_tol = o.abs_tol;
  rec.residual_tol = o.residual_tol;
  rec.n_rev = problem.n_rev;
  rec.schedule = opt.schedule;

  if (!eta_text.empty()) {
    rec.trial = -1;
    rec.report = solve_with_continuation(problem, parse_eta(eta_text), opt.schedule, opt.root);
  } else {
    for (int a = 0; a < attempts; ++a) {
      rec.trial = a;
      rec.report = solve_with_continuation(problem, sample_costates(c, o.seed, a), opt.schedule,
                                           opt.root);
      if (rec.report.converged) break;
    }
  }

  const std::string fmt = o.format.empty() ? "json" : o.format;
  emit(o.out, fmt == "csv" ? solve_csv(rec, o.timing) : to_json(rec, o.timing).dump(2) + "\n");
  if (!o.out.empty()) {
    std::fprintf(stdout, "converged=%s final_mass_kg=%.6f trial=%d wall_time_s=%.3f\n",
                 rec.report.converged ? "true" : "false", rec.report.final_mass_kg, rec.trial,
                 rec.report.wall_time);
  }
  if (!rec.report.converged) {
    std::fprintf(stderr, "mintraj: solve did not converge (stage %d)\n", rec.report.failed_stage);
    return kExitNotConverged;
  }
  return kExitOk;
}

int run_montecarlo(const CommonOptions& o, int trials, const std::string& coords,
                   const std::string& smoothing, std::optional<bool> stm, int threads,
                   const std::string& trials_out) {
  MonteCarloOptions opt = make_options(o);
  opt.threads = threads;
  const BenchmarkId id = parse_benchmark(o.problem);
  std::vector<MonteCarloCell> cells;
  for (const auto& cell : default_cells()) {
    if (coords != "all" && to_string(cell.coords) != coords) continue;
    if (smoothing != "all" && to_string(cell.smoothing) != smoothing) continue;
    if (stm && cell.use_stm != *stm) continue;
    cells.push_back(cell);
  }
  const MonteCarloReport rep = run_monte_carlo(id, trials, o.seed, cells, opt);

  const std::string fmt = o.format.empty() ? "csv" : o.format;
  emit(o.out, fmt == "json" ? to_json(rep, o.timing).dump(2) + "\n" : monte_carlo_csv(rep, o.timing));
  if (!trials_out.empty()) emit(trials_out, monte_carlo_trials_csv(rep, o.timing));
  if (!o.out.empty()) std::cout << monte_carlo_table(rep);
  return kExitOk;
}

int run_sample(const std::string& solution, int points, const std::string& out,
               std::optional<double> rho) {
  std::ifstream f(solution);
  if (!f) throw std::invalid_argument("cannot read solution file '" + solution + "'");
  const SolutionRecord rec = solution_from_json(nlohmann::json::parse(f));
  ShootingProblem problem = load_benchmark(rec.problem, rec.coords, rec.smoothing, rec.use_stm);
  problem.integrator.rel_tol = rec.rel_tol;
  problem.integrator.abs_tol = rec.abs_tol;
  const auto samples =
      sample_solution(problem, rec.report.eta0, rho.value_or(rec.schedule.rho_final), points);
  emit(out, samples_csv(samples));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-time minimum-fuel low-thrust rendezvous by indirect shooting"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string coords = "cartesian";
  std::string smoothing = "tanh";
  bool stm = true;
  int attempts = 10;
  std::string eta_text;

  auto* solve = app.add_subcommand("solve", "Solve one benchmark from seeded costate guesses");
  add_common(solve, common);
  solve->add_option("--coords", coords, "Coordinate set")
      ->check(CLI::IsMember({"cartesian", "mee"}))
      ->capture_default_str();
  solve->add_option("--smoothing", smoothing, "Throttle smoothing")
      ->check(CLI::IsMember({"tanh", "l2"}))
      ->capture_default_str();
  solve->add_flag("--stm,!--no-stm", stm, "Jacobian from the state transition matrix (default) or "
                                          "central differences");
  solve->add_option("--attempts", attempts, "Seeded guesses to try before giving up")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve->add_option("--eta0", eta_text, "Explicit initial costates, 7 comma-separated values");
  solve->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  int trials = 100;
  int threads = 0;
  std::string mc_coords = "all";
  std::string mc_smoothing = "all";
  bool mc_stm = false;
  bool mc_no_stm = false;
  std::string trials_out;
  auto* mc = app.add_subcommand("montecarlo", "Convergence comparison over seeded guesses");
  add_common(mc, common);
  mc->add_option("--trials", trials, "Trials per configuration")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mc->add_option("--coords", mc_coords, "Restrict to one coordinate set")
      ->check(CLI::IsMember({"all", "cartesian", "mee"}))
      ->capture_default_str();
  mc->add_option("--smoothing", mc_smoothing, "Restrict to one smoothing")
      ->check(CLI::IsMember({"all", "tanh", "l2"}))
      ->capture_default_str();
  auto* stm_flag = mc->add_flag("--stm", mc_stm, "Only STM rows");
  mc->add_flag("--no-stm", mc_no_stm, "Only finite-difference rows")->excludes(stm_flag);
  mc->add_option("--threads", threads, "Worker threads (overrides MINTRAJ_THREADS)")
      ->check(CLI::NonNegativeNumber);
  mc->add_option("--trials-out", trials_out, "Per-trial CSV output");
  mc->add_option("--format", common.format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  std::string solution;
  int points = 2000;
  std::string sample_out;
  std::optional<double> sample_rho;
  auto* sample = app.add_subcommand("sample", "Time series of a saved solution");
  sample->add_option("--solution", solution, "Solution JSON written by solve")->required();
  sample->add_option("--points", points, "Number of uniform samples")
      ->check(CLI::Range(2, 100000000))
      ->capture_default_str();
  sample->add_option("--rho", sample_rho, "Smoothing parameter (defaults to rho_final)");
  sample->add_option("--out", sample_out, "Output CSV (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (solve->parsed()) return run_solve(common, coords, smoothing, stm, attempts, eta_text);
    if (mc->parsed()) {
      std::optional<bool> only;
      if (mc_stm) only = true;
      if (mc_no_stm) only = false;
      return run_montecarlo(common, trials, mc_coords, mc_smoothing, only, threads, trials_out);
    }
    return run_sample(solution, points, sample_out, sample_rho);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "mintraj: %s\n", e.what());
    return kExitBadArgs;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "mintraj: bad solution file: %s\n", e.what());
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "mintraj: %s\n", e.what());
    return kExitNumeric;
  }
}
