// oci: feasibility, fusion, simulation and plot-data front-end.
//
// Exit codes: 0 success, 1 parse/usage error, 2 infeasible, 3 numerical trouble.

#include "oci/oci.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

namespace fs = std::filesystem;

enum Exit { kOk = 0, kParse = 1, kInfeasible = 2, kNumerical = 3 };

int exit_for(oci::SolveStatus s) {
  switch (s) {
    case oci::SolveStatus::Optimal: return kOk;
    case oci::SolveStatus::Infeasible: return kInfeasible;
    case oci::SolveStatus::NumericalTrouble: return kNumerical;
  }
  return kNumerical;
}

int cmd_feas(const std::string& path) {
  const auto f = oci::load_problem(path);
  const auto rep = oci::analyze(f.problem());
  std::cout << oci::to_json(rep).dump(2) << '\n';
  return rep.oci_feasible ? kOk : kInfeasible;
}

int cmd_solve(const std::string& path, const std::string& objective, int check, std::optional<long long> seed) {
  const auto f = oci::load_problem(path);
  if (check > 0 && !seed) throw oci::ParseError("--check requires --seed");
  if (seed && *seed < 0) throw oci::ParseError("--seed must be non-negative");
  const oci::Objective obj = objective.empty() ? f.objective
                             : objective == "trace" ? oci::Objective::Trace
                                                    : oci::Objective::LogDet;
  const auto p = f.problem();
  const auto req = f.projection();
  const auto sol = req ? oci::solve_with_projection_bound(p, obj, *req) : oci::solve_kahan_oci(p, obj);
  auto j = oci::to_json(sol);
  if (sol.ok() && check > 0) {
    const auto v = oci::check_consistency(p, sol.K, sol.B, static_cast<std::size_t>(check),
                                          static_cast<std::uint64_t>(*seed));
    j["check"] = {{"max_violation", v.max_violation}, {"samples", v.samples_checked}, {"pass", v.pass}};
  }
  std::cout << j.dump(2) << '\n';
  if (!sol.ok()) std::cerr << "solve: " << oci::to_string(sol.status) << ": " << sol.diagnostics << '\n';
  return exit_for(sol.status);
}

int cmd_simulate(const std::string& path, const std::string& method, const std::string& out,
                 double multiplier) {
  const auto s = oci::load_scenario(path);
  const auto m = oci::sim_method_from_string(method);
  oci::SimMetrics metrics;
  try {
    metrics = oci::run(s, m);
  } catch (const oci::SimulationError& e) {
    std::cerr << "simulate: " << e.what() << '\n';
    return kNumerical;
  }
  fs::create_directories(out);
  {
    std::ofstream csv(fs::path(out) / (method + "_metrics.csv"), std::ios::binary);
    oci::write_metrics_csv(csv, metrics);
  }
  std::ofstream js(fs::path(out) / (method + "_summary.json"), std::ios::binary);
  js << oci::summary_json(metrics, multiplier).dump(2) << '\n';
  return kOk;
}

void write_points(const fs::path& file, const oci::EllipsoidPoints& e) {
  std::ofstream out(file, std::ios::binary);
  out << "# degenerate=" << (e.degenerate ? 1 : 0) << " clip_radius=" << e.clip_radius << '\n';
  char buf[64];
  for (const auto& x : e.points) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", x(i));
      out << (i ? "," : "") << buf;
    }
    out << '\n';
  }
}

int cmd_plotdata(const std::string& path, const std::string& out, int resolution,
                 std::optional<long long> seed, int samples) {
  const auto f = oci::load_problem(path);
  if (seed && *seed < 0) throw oci::ParseError("--seed must be non-negative");
  const auto p = f.problem();
  if (p.m() != 2 && p.m() != 3)
    throw oci::ParseError("plotdata: unsupported dimension m = " + std::to_string(p.m()) + " (need 2 or 3)");
  fs::create_directories(out);
  oci::Json index;
  const auto ys = oci::inverse_bounds(p.info());
  for (std::size_t b = 0; b < ys.size(); ++b) {
    const auto pts = oci::ellipsoid_boundary_points(ys[b].Y.matrix(), resolution);
    const std::string name = "bound_" + std::to_string(b + 1) + ".csv";
    write_points(fs::path(out) / name, pts);
    index["bounds"].push_back({{"file", name}, {"degenerate", pts.degenerate}});
  }
  const auto sol = oci::solve_kahan_oci(p, f.objective);
  if (!sol.ok()) {
    std::cerr << "plotdata: " << oci::to_string(sol.status) << ": " << sol.diagnostics << '\n';
    return exit_for(sol.status);
  }
  const auto kahan = oci::ellipsoid_boundary_points(sol.Y, resolution);
  write_points(fs::path(out) / "kahan.csv", kahan);
  index["kahan"] = {{"file", "kahan.csv"}, {"degenerate", kahan.degenerate},
                    {"omega", oci::to_json(sol.omega.omega())}};
  // Extremes of the admissible set: boundary ellipsoids {x : x^T P^-1 x <= 1}.
  const auto ps = oci::sample_admissible(p.info(), static_cast<std::size_t>(samples),
                                         static_cast<std::uint64_t>(seed.value_or(0)));
  for (std::size_t s = 0; s < ps.size(); ++s) {
    const auto pts = oci::ellipsoid_boundary_points(oci::inverse_pd(ps[s].sym(), "P").matrix(), resolution);
    const std::string name = "admissible_" + std::to_string(s + 1) + ".csv";
    write_points(fs::path(out) / name, pts);
    index["admissible"].push_back(name);
  }
  std::ofstream(fs::path(out) / "index.json", std::ios::binary) << index.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Overlapping covariance intersection fusion"};
  app.require_subcommand(1);

  std::string file, objective, method = "oci", out;
  int check = 0, resolution = 64, samples = 8;
  long long seed_value = 0;
  double multiplier = 1.0;

  auto* feas = app.add_subcommand("feas", "Feasibility report for a problem file");
  feas->add_option("file", file)->required();

  auto* solve = app.add_subcommand("solve", "Solve the Kahan-family fusion problem");
  solve->add_option("file", file)->required();
  solve->add_option("--objective", objective)->check(CLI::IsMember({"trace", "logdet"}));
  solve->add_option("--check", check, "Consistency samples")->check(CLI::NonNegativeNumber);
  auto* solve_seed = solve->add_option("--seed", seed_value);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo cooperative localization");
  sim->add_option("file", file)->required();
  sim->add_option("--method", method)->check(CLI::IsMember({"oci", "sci", "naive"}));
  sim->add_option("--out", out)->required();
  sim->add_option("--multiplier", multiplier, "Violation threshold multiplier");

  auto* plot = app.add_subcommand("plotdata", "Ellipsoid point sets for m = 2 or 3");
  plot->add_option("file", file)->required();
  plot->add_option("--out", out)->required();
  plot->add_option("--resolution", resolution)->check(CLI::PositiveNumber);
  plot->add_option("--samples", samples)->check(CLI::NonNegativeNumber);
  auto* plot_seed = plot->add_option("--seed", seed_value);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kParse;
  }

  try {
    if (*feas) return cmd_feas(file);
    if (*solve)
      return cmd_solve(file, objective, check,
                       solve_seed->count() ? std::optional<long long>(seed_value) : std::nullopt);
    if (*sim) return cmd_simulate(file, method, out, multiplier);
    if (*plot) return cmd_plotdata(file, out, resolution,
                          plot_seed->count() ? std::optional<long long>(seed_value) : std::nullopt, samples);
  } catch (const oci::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const oci::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kParse;
}
