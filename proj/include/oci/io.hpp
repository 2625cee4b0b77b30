#pragma once

// JSON problem and scenario files. Matrices are row-major nested arrays;
// scalars and flat vectors are accepted where a 1x1 or one-row matrix is meant.

#include "oci/coop_sim.hpp"
#include "oci/feasibility.hpp"
#include "oci/oci_solver.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace oci {

using Json = nlohmann::json;

class ParseError : public Error {
 public:
  using Error::Error;
};

struct ProblemFile {
  Matrix H, R, C;
  std::vector<std::pair<Matrix, Matrix>> bounds;  // (W, X)
  std::optional<Matrix> D;
  std::optional<double> gamma;
  Objective objective = Objective::Trace;

  FusionProblem problem(const Tolerances& tol = {}) const {
    std::vector<ComponentBound> b;
    for (const auto& [W, X] : bounds) b.emplace_back(W, X, tol);
    return FusionProblem(H, R, C, InfoStructure(C.cols(), std::move(b)), tol);
  }

  std::optional<ProjectionBoundRequest> projection() const {
    if (!D) return std::nullopt;
    ProjectionBoundRequest r;
    r.D = *D;
    if (gamma) r.gamma = *gamma;
    return r;
  }

  bool operator==(const ProblemFile& o) const;
};

/// Exact equality, shapes included.
inline bool same_matrix(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

inline bool ProblemFile::operator==(const ProblemFile& o) const {
  if (!same_matrix(H, o.H) || !same_matrix(R, o.R) || !same_matrix(C, o.C)) return false;
  if (bounds.size() != o.bounds.size() || D.has_value() != o.D.has_value()) return false;
  for (std::size_t i = 0; i < bounds.size(); ++i)
    if (!same_matrix(bounds[i].first, o.bounds[i].first) ||
        !same_matrix(bounds[i].second, o.bounds[i].second))
      return false;
  if (D && !same_matrix(*D, *o.D)) return false;
  return gamma == o.gamma && objective == o.objective;
}

namespace detail {

[[noreturn]] inline void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "non-finite number");
  return v;
}

inline long long integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

inline Matrix matrix(const Json& j, const std::string& path) {
  if (j.is_number()) return Matrix::Constant(1, 1, number(j, path));
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array");
  if (j.front().is_number()) {
    Matrix m(1, static_cast<Eigen::Index>(j.size()));
    for (std::size_t c = 0; c < j.size(); ++c)
      m(0, static_cast<Eigen::Index>(c)) = number(j[c], path + "[" + std::to_string(c) + "]");
    return m;
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string pr = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].empty()) fail(pr, "expected a non-empty row");
    if (r == 0) cols = j[r].size();
    if (j[r].size() != cols) fail(pr, "ragged row");
  }
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number(j[r][c], path + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  return m;
}

inline std::vector<double> vec(const Json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path)};
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(source + ": malformed JSON: " + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

/// Parses and checks dimensions; "$" denotes the document root in messages.
inline ProblemFile parse_problem(const Json& j, const Tolerances& tol = {}) {
  using namespace detail;
  ProblemFile f;
  f.H = matrix(field(j, "H", "$"), "$.H");
  f.R = matrix(field(j, "R", "$"), "$.R");
  f.C = matrix(field(j, "C", "$"), "$.C");
  const Json& b = field(j, "bounds", "$");
  if (!b.is_array() || b.empty()) fail("$.bounds", "expected a non-empty array");
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::string p = "$.bounds[" + std::to_string(i) + "]";
    f.bounds.emplace_back(matrix(field(b[i], "W", p), p + ".W"), matrix(field(b[i], "X", p), p + ".X"));
  }
  if (j.contains("projection")) {
    const Json& pj = j["projection"];
    f.D = matrix(field(pj, "D", "$.projection"), "$.projection.D");
    if (pj.contains("gamma")) f.gamma = number(pj["gamma"], "$.projection.gamma");
  }
  if (j.contains("objective")) {
    const Json& o = j["objective"];
    if (o == "trace") f.objective = Objective::Trace;
    else if (o == "logdet") f.objective = Objective::LogDet;
    else fail("$.objective", "expected \"trace\" or \"logdet\"");
  }
  try {
    (void)f.problem(tol);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("$: invalid problem: ") + e.what());
  }
  if (f.D && f.D->cols() != f.C.cols()) fail("$.projection.D", "column count must equal columns of C");
  return f;
}

inline ProblemFile parse_problem_text(const std::string& text, const std::string& source = "<input>") {
  return parse_problem(detail::parse_text(text, source));
}

inline ProblemFile load_problem(const std::string& path) {
  return parse_problem_text(detail::read_file(path), path);
}

inline Json to_json(const ProblemFile& f) {
  Json j;
  j["H"] = to_json(f.H);
  j["R"] = to_json(f.R);
  j["C"] = to_json(f.C);
  j["bounds"] = Json::array();
  for (const auto& [W, X] : f.bounds) j["bounds"].push_back({{"W", to_json(W)}, {"X", to_json(X)}});
  if (f.D) {
    j["projection"]["D"] = to_json(*f.D);
    if (f.gamma) j["projection"]["gamma"] = *f.gamma;
  }
  j["objective"] = f.objective == Objective::Trace ? "trace" : "logdet";
  return j;
}

inline NetworkScenario parse_scenario(const Json& j) {
  using namespace detail;
  NetworkScenario s;
  s.vehicle_count = static_cast<int>(integer(field(j, "vehicles", "$"), "$.vehicles"));
  const Json& e = field(j, "edges", "$");
  if (!e.is_array()) fail("$.edges", "expected an array of pairs");
  for (std::size_t i = 0; i < e.size(); ++i) {
    const std::string p = "$.edges[" + std::to_string(i) + "]";
    if (!e[i].is_array() || e[i].size() != 2) fail(p, "expected a pair");
    s.edges.emplace_back(static_cast<int>(integer(e[i][0], p + "[0]")),
                         static_cast<int>(integer(e[i][1], p + "[1]")));
  }
  s.Q = vec(field(j, "Q", "$"), "$.Q");
  s.R_meas = vec(field(j, "R_meas", "$"), "$.R_meas");
  s.steps = static_cast<int>(integer(field(j, "steps", "$"), "$.steps"));
  const long long seed = integer(field(j, "seed", "$"), "$.seed");
  if (seed < 0) fail("$.seed", "must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  s.monte_carlo_runs = static_cast<int>(integer(field(j, "monte_carlo_runs", "$"), "$.monte_carlo_runs"));
  if (j.contains("initial_bounds")) s.initial_bound = vec(j["initial_bounds"], "$.initial_bounds");
  if (j.contains("initial_truth")) s.initial_truth = vec(j["initial_truth"], "$.initial_truth");
  try {
    s.validate();
  } catch (const Error& e2) {
    throw ParseError(std::string("$: ") + e2.what());
  }
  return s;
}

inline NetworkScenario load_scenario(const std::string& path) {
  return parse_scenario(detail::parse_text(detail::read_file(path), path));
}

inline Json to_json(const NetworkScenario& s) {
  Json j;
  j["vehicles"] = s.vehicle_count;
  j["edges"] = Json::array();
  for (const auto& [a, b] : s.edges) j["edges"].push_back({a, b});
  j["Q"] = s.Q;
  j["R_meas"] = s.R_meas;
  j["steps"] = s.steps;
  j["seed"] = s.seed;
  j["monte_carlo_runs"] = s.monte_carlo_runs;
  if (!s.initial_bound.empty()) j["initial_bounds"] = s.initial_bound;
  if (!s.initial_truth.empty()) j["initial_truth"] = s.initial_truth;
  return j;
}

inline Json to_json(const FeasibilityReport& r) {
  Json j;
  j["p_bounded"] = r.p_bounded;
  j["cpc_bounded"] = r.cpc_bounded;
  j["sufficient_feasible"] = r.sufficient_feasible;
  j["oci_feasible"] = r.oci_feasible;
  j["h_full_rank"] = r.h_full_rank;
  j["reason"] = to_string(r.reason);
  j["borderline"] = r.borderline;
  j["margins"] = {{"p_bounded", r.rank_margins.p_bounded},
                  {"cpc_bounded", r.rank_margins.cpc_bounded},
                  {"h_rank", r.rank_margins.h_rank},
                  {"oci_feasible", r.rank_margins.oci_feasible}};
  return j;
}

inline Json to_json(const FusionSolution& s) {
  Json j;
  j["status"] = to_string(s.status);
  if (!s.ok()) {
    j["diagnostics"] = s.diagnostics;
    return j;
  }
  j["K"] = to_json(s.K);
  j["B"] = to_json(s.B);
  j["omega"] = to_json(s.omega.omega());
  j["Y"] = to_json(s.Y);
  j["objective_value"] = s.objective_value;
  if (s.M) {
    j["M"] = to_json(*s.M);
    j["gamma"] = s.gamma;
  }
  return j;
}

/// Columnar metrics: run,step,vehicle,sq_error,bound,method. Steps start at 1.
inline void write_metrics_csv(std::ostream& out, const SimMetrics& m) {
  out << "run,step,vehicle,sq_error,bound,method\n";
  char buf[128];
  const std::string method = to_string(m.method);
  for (int r = 0; r < m.runs; ++r)
    for (int k = 0; k < m.steps; ++k)
      for (int v = 0; v < m.vehicles; ++v) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,", r, k + 1, v, m.sq(r, k, v), m.bnd(k, v));
        out << buf << method << '\n';
      }
}

inline Json summary_json(const SimMetrics& m, double multiplier = 1.0) {
  Json j;
  j["method"] = to_string(m.method);
  j["runs"] = m.runs;
  j["steps"] = m.steps;
  j["vehicles"] = m.vehicles;
  j["mean_bound"] = m.mean_bound();
  j["violation_fraction"] = m.violation_fraction();
  j["violation_multiplier"] = multiplier;
  j["violation_count"] = m.violation_count(multiplier);
  j["rmse"] = m.rmse();
  return j;
}

}  // namespace oci
