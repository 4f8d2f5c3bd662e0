// Times the serial and OpenMP Monte Carlo drivers on the same trial set and checks that
// they agree.

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "mintraj/monte_carlo.hpp"
#include "mintraj/report_io.hpp"

using namespace mintraj;

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel Monte Carlo timing"};
  std::string problem = "e2m";
  int trials = 8;
  std::uint64_t seed = 1;
  int threads = 0;
  app.add_option("--problem", problem, "Benchmark problem")->check(CLI::IsMember({"e2m", "e2d"}))
      ->capture_default_str();
  app.add_option("--trials", trials, "Trials per configuration")->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", seed, "Seed for the costate guesses")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads, 0 for MINTRAJ_THREADS or the OpenMP default")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const BenchmarkId id = parse_benchmark(problem);
  MonteCarloOptions opt;
  opt.threads = threads;
  const auto cells = default_cells();

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const MonteCarloReport ser = run_monte_carlo_serial(id, trials, seed, cells, opt);
  const auto t1 = clock::now();
  const MonteCarloReport par = run_monte_carlo(id, trials, seed, cells, opt);
  const auto t2 = clock::now();

  const double ts = std::chrono::duration<double>(t1 - t0).count();
  const double tp = std::chrono::duration<double>(t2 - t1).count();
  const bool same = monte_carlo_trials_csv(ser, false) == monte_carlo_trials_csv(par, false);
  std::printf("%s, %d trials x %zu cells, seed %llu\n", problem.c_str(), trials, cells.size(),
              static_cast<unsigned long long>(seed));
  std::printf("serial   %8.2f s\n", ts);
  std::printf("parallel %8.2f s  (speedup %.2f)\n", tp, ts / tp);
  std::printf("results %s\n", same ? "identical" : "DIFFER");
  std::fputs(monte_carlo_table(par).c_str(), stdout);
  return same ? 0 : 1;
}
