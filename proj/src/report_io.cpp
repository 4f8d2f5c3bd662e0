#include "mintraj/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mintraj {

using nlohmann::json;

namespace {

json vec_json(const Vec7& v) {
  json a = json::array();
  for (int i = 0; i < 7; ++i) a.push_back(v[i]);
  return a;
}

Vec7 vec_from(const json& a) {
  if (!a.is_array() || a.size() != 7) throw std::invalid_argument("eta0 must have 7 entries");
  Vec7 v;
  for (int i = 0; i < 7; ++i) v[i] = a.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

// NaN is not valid JSON.
json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string cell_label(const MonteCarloCell& c) {
  return std::string(to_string(c.smoothing)) + "," + std::string(to_string(c.coords)) + "," +
         (c.use_stm ? "true" : "false");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const SolutionRecord& rec, bool include_timing) {
  const SolveReport& r = rec.report;
  json j;
  j["problem"] = std::string(to_string(rec.problem));
  j["coords"] = std::string(to_string(rec.coords));
  j["smoothing"] = std::string(to_string(rec.smoothing));
  j["use_stm"] = rec.use_stm;
  j["converged"] = r.converged;
  j["rho_final"] = rec.schedule.rho_final;
  j["rho_init"] = rec.schedule.rho_init;
  j["rho_factor"] = rec.schedule.rho_factor;
  j["eta0"] = vec_json(r.eta0);
  j["eta0_guess"] = vec_json(r.eta0_guess);
  j["final_mass_kg"] = number_or_null(r.final_mass_kg);
  j["residual_inf_norm"] = number_or_null(r.residual_inf_norm);
  j["residual_tol"] = rec.residual_tol;
  j["rel_tol"] = rec.rel_tol;
  j["abs_tol"] = rec.abs_tol;
  j["n_rev"] = rec.n_rev;
  j["failed_stage"] = r.failed_stage;
  json ladder = json::array();
  for (const auto& s : r.stages) {
    ladder.push_back({{"rho", s.rho},
                      {"iterations", s.iterations},
                      {"residual", number_or_null(s.residual_norm)},
                      {"status", to_string(s.status)},
                      {"final_mass_kg", number_or_null(s.final_mass_kg)}});
  }
  j["rho_ladder"] = ladder;
  j["seed"] = rec.seed;
  j["trial"] = rec.trial;
  if (include_timing) j["wall_time_s"] = r.wall_time;
  return j;
}

SolutionRecord solution_from_json(const json& j) {
  SolutionRecord rec;
  rec.problem = parse_benchmark(j.at("problem").get<std::string>());
  rec.coords = parse_coordinates(j.at("coords").get<std::string>());
  rec.smoothing = parse_smoothing(j.at("smoothing").get<std::string>());
  rec.use_stm = j.value("use_stm", true);
  rec.seed = j.value("seed", std::uint64_t{0});
  rec.trial = j.value("trial", 0);
  rec.rel_tol = j.value("rel_tol", 1e-13);
  rec.abs_tol = j.value("abs_tol", 1e-13);
  rec.residual_tol = j.value("residual_tol", 1e-9);
  rec.n_rev = j.value("n_rev", 0);
  rec.schedule.rho_final = j.at("rho_final").get<double>();
  rec.schedule.rho_init = j.value("rho_init", rec.schedule.rho_final);
  rec.schedule.rho_factor = j.value("rho_factor", 0.1);
  rec.report.eta0 = vec_from(j.at("eta0"));
  rec.report.converged = j.value("converged", false);
  if (j.contains("final_mass_kg") && j["final_mass_kg"].is_number()) {
    rec.report.final_mass_kg = j["final_mass_kg"].get<double>();
  }
  return rec;
}

std::string monte_carlo_csv(const MonteCarloReport& rep, bool include_timing) {
  std::ostringstream os;
  os << "smoothing,coords,stm,trials,converged,convergence_pct";
  if (include_timing) os << ",mean_time_all_s,mean_time_converged_s";
  os << ",seed\n";
  for (const auto& c : rep.cells) {
    os << cell_label(c.cell) << ',' << c.trials.size() << ',' << c.converged_count() << ','
       << format_double(c.convergence_percent());
    if (include_timing) {
      os << ',' << format_double(c.mean_time_all()) << ',' << format_double(c.mean_time_converged());
    }
    os << ',' << rep.seed << '\n';
  }
  return os.str();
}

std::string monte_carlo_trials_csv(const MonteCarloReport& rep, bool include_timing) {
  std::ostringstream os;
  os << "smoothing,coords,stm,trial,converged,status,failed_stage,final_mass_kg,residual,revolutions,"
        "iterations";
  for (int i = 0; i < 7; ++i) os << ",eta0_" << i;
  if (include_timing) os << ",wall_time_s";
  os << '\n';
  for (const auto& c : rep.cells) {
    for (const auto& t : c.trials) {
      os << cell_label(c.cell) << ',' << t.index << ',' << (t.converged ? 1 : 0) << ','
         << to_string(t.status) << ',' << t.failed_stage << ',' << format_double(t.final_mass_kg)
         << ',' << format_double(t.residual_inf_norm) << ',' << t.revolutions << ','
         << t.iterations;
      for (int i = 0; i < 7; ++i) os << ',' << format_double(t.eta0[i]);
      if (include_timing) os << ',' << format_double(t.wall_time);
      os << '\n';
    }
  }
  return os.str();
}

json to_json(const MonteCarloReport& rep, bool include_timing) {
  json j;
  j["problem"] = std::string(to_string(rep.problem));
  j["trials"] = rep.trials;
  j["seed"] = rep.seed;
  json rows = json::array();
  for (const auto& c : rep.cells) {
    json row;
    row["smoothing"] = std::string(to_string(c.cell.smoothing));
    row["coords"] = std::string(to_string(c.cell.coords));
    row["stm"] = c.cell.use_stm;
    row["converged"] = c.converged_count();
    row["convergence_pct"] = c.convergence_percent();
    if (include_timing) {
      row["mean_time_all_s"] = number_or_null(c.mean_time_all());
      row["mean_time_converged_s"] = number_or_null(c.mean_time_converged());
    }
    json trials = json::array();
    for (const auto& t : c.trials) {
      json tj{{"trial", t.index},
              {"converged", t.converged},
              {"status", to_string(t.status)},
              {"final_mass_kg", number_or_null(t.final_mass_kg)},
              {"residual", number_or_null(t.residual_inf_norm)},
              {"revolutions", t.revolutions},
              {"eta0", vec_json(t.eta0)}};
      if (include_timing) tj["wall_time_s"] = t.wall_time;
      trials.push_back(tj);
    }
    row["trials"] = trials;
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

std::string monte_carlo_table(const MonteCarloReport& rep) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "%-10s %-10s %-5s %12s %14s %14s\n", "smoothing", "coords", "STM",
                "converged %", "time all (s)", "time conv (s)");
  os << line;
  for (const auto& c : rep.cells) {
    std::snprintf(line, sizeof line, "%-10s %-10s %-5s %12.1f %14.3f %14.3f\n",
                  std::string(to_string(c.cell.smoothing)).c_str(),
                  std::string(to_string(c.cell.coords)).c_str(), c.cell.use_stm ? "yes" : "no",
                  c.convergence_percent(), c.mean_time_all(), c.mean_time_converged());
    os << line;
  }
  os << "problem " << to_string(rep.problem) << ", " << rep.trials << " trials, seed " << rep.seed
     << '\n';
  return os.str();
}

std::string samples_csv(const std::vector<SamplePoint>& samples) {
  std::ostringstream os;
  os << "t,x,y,z,vx,vy,vz,m,lam1,lam2,lam3,lam4,lam5,lam6,lam_m,alpha_x,alpha_y,alpha_z,H,S,delta\n";
  for (const auto& s : samples) {
    os << format_double(s.t);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(s.r[i]);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(s.v[i]);
    for (int i = 6; i < 14; ++i) os << ',' << format_double(s.z[i]);
    for (int i = 0; i < 3; ++i) os << ',' << format_double(s.thrust_dir[i]);
    os << ',' << format_double(s.H) << ',' << format_double(s.S) << ',' << format_double(s.delta)
       << '\n';
  }
  return os.str();
}

}  // namespace mintraj
