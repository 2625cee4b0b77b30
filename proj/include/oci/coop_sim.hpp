#pragma once

// Scalar random-walk vehicles on a graph fusing their own prediction with
// relative-measurement estimates from neighbors.
//
// Vehicle i with sorted neighborhood N_i (self included) stacks its estimates
// in the order [self, neighbors by id] and its prior errors in the order of
// N_i, so C is the permutation between the two. For a line graph 0 - 1 - 2
// and i = 1 this is exactly
//   R = diag(Q_1, R_10 + Q_0, R_12 + Q_2),  C = [0 1 0; 1 0 0; 0 0 1].

#include "oci/baselines.hpp"
#include "oci/oci_solver.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oci {

enum class SimMethod { OCI, SCI, Naive };

inline std::string to_string(SimMethod m) {
  switch (m) {
    case SimMethod::OCI: return "oci";
    case SimMethod::SCI: return "sci";
    case SimMethod::Naive: return "naive";
  }
  return "unknown";
}

inline SimMethod sim_method_from_string(const std::string& s) {
  if (s == "oci") return SimMethod::OCI;
  if (s == "sci") return SimMethod::SCI;
  if (s == "naive") return SimMethod::Naive;
  throw Error("unknown method '" + s + "'");
}

class SimulationError : public Error {
 public:
  SimulationError(int step, int vehicle, const std::string& what)
      : Error("step " + std::to_string(step) + ", vehicle " + std::to_string(vehicle) + ": " +
              what),
        step_(step),
        vehicle_(vehicle) {}
  int step() const { return step_; }
  int vehicle() const { return vehicle_; }

 private:
  int step_;
  int vehicle_;
};

struct NetworkScenario {
  int vehicle_count = 0;
  std::vector<std::pair<int, int>> edges;  // undirected
  std::vector<double> Q;                   // drift variance per vehicle
  std::vector<double> R_meas;              // relative-measurement variance per edge
  std::vector<double> initial_truth;       // defaults to zeros
  std::vector<double> initial_bound;       // prior error variance per vehicle, defaults to ones
  int steps = 0;
  std::uint64_t seed = 0;
  int monte_carlo_runs = 1;

  void validate() {
    if (vehicle_count < 1) throw Error("scenario: vehicles must be >= 1");
    const auto n = static_cast<std::size_t>(vehicle_count);
    if (Q.size() != n) throw Error("scenario: Q must have one entry per vehicle");
    if (R_meas.size() != edges.size()) throw Error("scenario: R_meas must have one entry per edge");
    if (initial_truth.empty()) initial_truth.assign(n, 0.0);
    if (initial_bound.empty()) initial_bound.assign(n, 1.0);
    if (initial_truth.size() != n) throw Error("scenario: initial_truth has wrong length");
    if (initial_bound.size() != n) throw Error("scenario: initial_bounds has wrong length");
    for (double q : Q)
      if (!(q > 0)) throw Error("scenario: Q entries must be > 0");
    for (double r : R_meas)
      if (!(r > 0)) throw Error("scenario: R_meas entries must be > 0");
    for (double b : initial_bound)
      if (!(b > 0)) throw Error("scenario: initial bounds must be > 0");
    std::vector<std::pair<int, int>> seen;
    for (const auto& [a, b] : edges) {
      if (a < 0 || b < 0 || a >= vehicle_count || b >= vehicle_count)
        throw Error("scenario: edge endpoint out of range");
      if (a == b) throw Error("scenario: self-loop on vehicle " + std::to_string(a));
      const auto key = std::minmax(a, b);
      if (std::find(seen.begin(), seen.end(), std::pair<int, int>(key)) != seen.end())
        throw Error("scenario: duplicate edge");
      seen.emplace_back(key);
    }
    if (steps < 0) throw Error("scenario: steps must be >= 0");
    if (monte_carlo_runs < 1) throw Error("scenario: monte_carlo_runs must be >= 1");
  }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
      if (a == i) out.push_back(b);
      if (b == i) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Sorted ids of i and its neighbors.
  std::vector<int> neighborhood(int i) const {
    auto out = neighbors(i);
    out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
  }

  double edge_variance(int a, int b) const {
    for (std::size_t e = 0; e < edges.size(); ++e)
      if ((edges[e].first == a && edges[e].second == b) ||
          (edges[e].first == b && edges[e].second == a))
        return R_meas[e];
    throw Error("scenario: no edge between " + std::to_string(a) + " and " + std::to_string(b));
  }
};

/// Bound state of one vehicle: X_bound over `neighborhood` (sorted ids).
struct VehicleTracker {
  double x_hat = 0.0;
  std::vector<int> neighborhood;
  Matrix X_bound;
};

/// Gain and fused bound of one vehicle at one step. The gain acts on the
/// estimate stack [own prediction, neighbor estimates in id order].
struct VehicleFusion {
  std::vector<int> order;
  Vector gain;
  double bound = 0.0;
};

struct StepPlan {
  std::vector<VehicleFusion> fusion;
  std::vector<VehicleTracker> next;  // bound state after the step
};

namespace detail {

inline std::vector<int> estimate_order(const NetworkScenario& s, int i) {
  std::vector<int> order{i};
  for (int j : s.neighbors(i)) order.push_back(j);
  return order;
}

inline Eigen::Index index_of(const std::vector<int>& ids, int id) {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw Error("id " + std::to_string(id) + " not in neighborhood");
  return it - ids.begin();
}

inline Matrix selector(const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix W = Matrix::Zero(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) W(static_cast<Eigen::Index>(r), index_of(cols, rows[r])) = 1.0;
  return W;
}

inline Matrix sub_block(const Matrix& X, const std::vector<int>& ids, const std::vector<int>& keep) {
  const Matrix S = selector(keep, ids);
  return S * X * S.transpose();
}

inline std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// R = diag(Q_i, R_ij + Q_j, ...) in estimate order.
inline Matrix fusion_noise(const NetworkScenario& s, int i, const std::vector<int>& order) {
  Vector r(static_cast<Eigen::Index>(order.size()));
  r(0) = s.Q[static_cast<std::size_t>(i)];
  for (std::size_t a = 1; a < order.size(); ++a)
    r(static_cast<Eigen::Index>(a)) =
        s.edge_variance(i, order[a]) + s.Q[static_cast<std::size_t>(order[a])];
  return r.asDiagonal();
}

}  // namespace detail

/// Fusion instance of vehicle i: own bound over N_i plus each neighbor's bound
/// restricted to the coordinates it shares with N_i.
inline FusionProblem build_fusion_problem(const NetworkScenario& s,
                                          const std::vector<VehicleTracker>& trackers, int i) {
  const auto& self = trackers.at(static_cast<std::size_t>(i));
  const auto& Ni = self.neighborhood;
  const auto order = detail::estimate_order(s, i);
  const auto o = static_cast<Eigen::Index>(order.size());
  const Matrix H = Matrix::Ones(o, 1);
  const Matrix C = detail::selector(order, Ni);
  std::vector<ComponentBound> bounds;
  bounds.emplace_back(Matrix::Identity(o, o), self.X_bound);
  for (std::size_t a = 1; a < order.size(); ++a) {
    const auto& nb = trackers.at(static_cast<std::size_t>(order[a]));
    if (nb.X_bound.rows() != static_cast<Eigen::Index>(nb.neighborhood.size()))
      throw Error("neighbor bound of vehicle " + std::to_string(order[a]) + " has wrong dimension");
    const auto shared = detail::intersect(Ni, nb.neighborhood);
    bounds.emplace_back(detail::selector(shared, Ni),
                        detail::sub_block(nb.X_bound, nb.neighborhood, shared));
  }
  return FusionProblem(H, detail::fusion_noise(s, i, order), C,
                       InfoStructure(o, std::move(bounds)));
}

inline std::vector<VehicleTracker> initial_trackers(const NetworkScenario& s, SimMethod) {
  std::vector<VehicleTracker> out;
  for (int i = 0; i < s.vehicle_count; ++i) {
    VehicleTracker t;
    t.x_hat = s.initial_truth[static_cast<std::size_t>(i)];
    t.neighborhood = s.neighborhood(i);
    Vector d(static_cast<Eigen::Index>(t.neighborhood.size()));
    for (std::size_t a = 0; a < t.neighborhood.size(); ++a)
      d(static_cast<Eigen::Index>(a)) = s.initial_bound[static_cast<std::size_t>(t.neighborhood[a])];
    t.X_bound = d.asDiagonal();
    out.push_back(std::move(t));
  }
  return out;
}

namespace detail {

/// Post-fusion errors of the vehicles in N_i as F * (prior errors over E_i)
/// + G * (fresh noise), with E_i the union of the neighbors' neighborhoods.
struct Propagation {
  std::vector<int> lifted;  // E_i
  Matrix F;
  Matrix G;
  Vector noise_var;
};

inline Propagation propagation(const NetworkScenario& s, const std::vector<VehicleFusion>& fusion,
                               const std::vector<int>& Ni) {
  Propagation pr;
  for (int j : Ni)
    for (int l : s.neighborhood(j)) pr.lifted.push_back(l);
  std::sort(pr.lifted.begin(), pr.lifted.end());
  pr.lifted.erase(std::unique(pr.lifted.begin(), pr.lifted.end()), pr.lifted.end());
  // Noise: drift of every vehicle in E_i, then one measurement per directed edge used.
  std::vector<std::pair<int, int>> meas;
  for (int j : Ni)
    for (int l : s.neighbors(j)) meas.emplace_back(j, l);
  const auto nE = static_cast<Eigen::Index>(pr.lifted.size());
  const auto nx = nE + static_cast<Eigen::Index>(meas.size());
  pr.F = Matrix::Zero(static_cast<Eigen::Index>(Ni.size()), nE);
  pr.G = Matrix::Zero(static_cast<Eigen::Index>(Ni.size()), nx);
  pr.noise_var = Vector::Zero(nx);
  for (Eigen::Index l = 0; l < nE; ++l) pr.noise_var(l) = s.Q[static_cast<std::size_t>(pr.lifted[static_cast<std::size_t>(l)])];
  for (std::size_t e = 0; e < meas.size(); ++e)
    pr.noise_var(nE + static_cast<Eigen::Index>(e)) = s.edge_variance(meas[e].first, meas[e].second);
  for (std::size_t r = 0; r < Ni.size(); ++r) {
    const int j = Ni[r];
    const auto& fj = fusion[static_cast<std::size_t>(j)];
    const auto row = static_cast<Eigen::Index>(r);
    for (std::size_t a = 0; a < fj.order.size(); ++a) {
      const int l = fj.order[a];
      const double k = fj.gain(static_cast<Eigen::Index>(a));
      const Eigen::Index col = index_of(pr.lifted, l);
      pr.F(row, col) += k;
      pr.G(row, col) -= k;
      if (a > 0) {
        const auto it = std::find(meas.begin(), meas.end(), std::pair<int, int>(j, l));
        pr.G(row, nE + (it - meas.begin())) -= k;
      }
    }
  }
  return pr;
}

}  // namespace detail

/// Gains and bounds for one synchronous step, given the bound state at k-1.
inline StepPlan plan_step(const NetworkScenario& s, const std::vector<VehicleTracker>& trackers,
                          int k, SimMethod method, const Tolerances& tol = {}) {
  StepPlan plan;
  plan.fusion.resize(trackers.size());
  for (int i = 0; i < s.vehicle_count; ++i) {
    auto& f = plan.fusion[static_cast<std::size_t>(i)];
    f.order = detail::estimate_order(s, i);
    if (f.order.size() == 1) {
      // Prediction only.
      f.gain = Vector::Ones(1);
      f.bound = trackers[static_cast<std::size_t>(i)].X_bound(0, 0) + s.Q[static_cast<std::size_t>(i)];
      continue;
    }
    const FusionProblem p = build_fusion_problem(s, trackers, i);
    if (method == SimMethod::Naive) {
      // Treat every estimate as independent with its own variance.
      const Matrix Qn = p.R().matrix() + p.C() * Matrix(trackers[static_cast<std::size_t>(i)].X_bound.diagonal().asDiagonal()) * p.C().transpose();
      const Vector qi = Qn.diagonal().cwiseInverse();
      f.bound = 1.0 / qi.sum();
      f.gain = qi * f.bound;
      continue;
    }
    const FusionProblem q = method == SimMethod::SCI ? sci_restriction(p) : p;
    const FusionSolution sol = solve_kahan_oci(q, Objective::Trace, tol);
    if (!sol.ok()) throw SimulationError(k, i, "fusion solve failed: " + sol.diagnostics);
    f.gain = sol.K.row(0).transpose();
    f.bound = sol.B(0, 0);
    if (std::abs(f.gain.sum() - 1.0) > tol.tol_check)
      throw SimulationError(k, i, "fusion gain is not unbiased");
  }

  plan.next = trackers;
  for (int i = 0; i < s.vehicle_count; ++i) {
    auto& t = plan.next[static_cast<std::size_t>(i)];
    const auto& Ni = t.neighborhood;
    if (method != SimMethod::OCI || Ni.size() == 1) {
      // Scalar bounds only: neighbors' own fused bounds on the diagonal.
      Vector d(static_cast<Eigen::Index>(Ni.size()));
      for (std::size_t a = 0; a < Ni.size(); ++a)
        d(static_cast<Eigen::Index>(a)) = plan.fusion[static_cast<std::size_t>(Ni[a])].bound;
      t.X_bound = d.asDiagonal();
      continue;
    }
    // Lifted instance over E_i with the neighbors' full bounds; the projection
    // bound on F P F^T plus the exactly known fresh-noise term bounds the new
    // neighborhood errors.
    const auto pr = detail::propagation(s, plan.fusion, Ni);
    const auto order = detail::estimate_order(s, i);
    std::vector<ComponentBound> bounds;
    for (int j : Ni) {
      const auto& tj = trackers[static_cast<std::size_t>(j)];
      bounds.emplace_back(detail::selector(tj.neighborhood, pr.lifted), tj.X_bound);
    }
    const auto o = static_cast<Eigen::Index>(order.size());
    const FusionProblem lifted(Matrix::Ones(o, 1), detail::fusion_noise(s, i, order),
                               detail::selector(order, pr.lifted),
                               InfoStructure(static_cast<Eigen::Index>(pr.lifted.size()), std::move(bounds)));
    ProjectionBoundRequest req;
    req.D = pr.F;
    const FusionSolution sol = solve_with_projection_bound(lifted, Objective::Trace, req, tol);
    if (!sol.ok() || !sol.M) throw SimulationError(k, i, "bound propagation failed: " + sol.diagnostics);
    const Matrix X = *sol.M + pr.G * pr.noise_var.asDiagonal() * pr.G.transpose();
    t.X_bound = SymMatrix(X).matrix();
  }
  return plan;
}

/// Bound schedule for all steps; it does not depend on noise realizations.
inline std::vector<StepPlan> plan_run(const NetworkScenario& s, SimMethod method,
                                      const Tolerances& tol = {}) {
  std::vector<StepPlan> plans;
  auto trackers = initial_trackers(s, method);
  for (int k = 1; k <= s.steps; ++k) {
    plans.push_back(plan_step(s, trackers, k, method, tol));
    trackers = plans.back().next;
  }
  return plans;
}

/// Truth and estimates of one Monte Carlo run.
struct RunState {
  std::vector<double> truth;
  std::vector<double> estimate;
};

/// Independent stream per (seed, run, vehicle).
inline std::mt19937_64 vehicle_stream(std::uint64_t seed, int run, int vehicle) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run), static_cast<std::uint32_t>(vehicle)};
  return std::mt19937_64(seq);
}

/// Advance truth by the random walk, form predictions and relative-measurement
/// estimates, and fuse with the planned gains.
inline void step(const NetworkScenario& s, const StepPlan& plan, RunState& st,
                 std::vector<std::mt19937_64>& streams) {
  const auto n = static_cast<std::size_t>(s.vehicle_count);
  std::vector<double> truth(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::normal_distribution<double> nd(0.0, std::sqrt(s.Q[j]));
    truth[j] = st.truth[j] + nd(streams[j]);
  }
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = plan.fusion[i];
    double x = f.gain(0) * st.estimate[i];
    for (std::size_t a = 1; a < f.order.size(); ++a) {
      const auto p = static_cast<std::size_t>(f.order[a]);
      std::normal_distribution<double> nd(0.0, std::sqrt(s.edge_variance(static_cast<int>(i), f.order[a])));
      const double y = truth[p] - truth[i] + nd(streams[i]);
      x += f.gain(static_cast<Eigen::Index>(a)) * (st.estimate[p] - y);
    }
    next[i] = x;
  }
  st.truth = std::move(truth);
  st.estimate = std::move(next);
}

struct SimMetrics {
  SimMethod method = SimMethod::OCI;
  int runs = 0, steps = 0, vehicles = 0;
  std::vector<double> sq_error;  // [run][step][vehicle], flattened
  std::vector<double> error;     // signed, same layout
  std::vector<double> bound;     // [step][vehicle]

  double& sq(int r, int k, int v) { return sq_error[idx(r, k, v)]; }
  double sq(int r, int k, int v) const { return sq_error[idx(r, k, v)]; }
  double err(int r, int k, int v) const { return error[idx(r, k, v)]; }
  double bnd(int k, int v) const { return bound[static_cast<std::size_t>(k * vehicles + v)]; }

  double second_moment(int k, int v) const {
    double acc = 0;
    for (int r = 0; r < runs; ++r) acc += sq(r, k, v);
    return acc / runs;
  }
  /// Three standard errors of the sample second moment.
  double mc_slack(int k, int v) const {
    const double mean = second_moment(k, v);
    double acc = 0;
    for (int r = 0; r < runs; ++r) acc += (sq(r, k, v) - mean) * (sq(r, k, v) - mean);
    const double sd = runs > 1 ? std::sqrt(acc / (runs - 1)) : 0.0;
    return 3.0 * sd / std::sqrt(static_cast<double>(runs));
  }
  /// Fraction of (step, vehicle) cells whose second moment exceeds bound + slack.
  double violation_fraction(bool with_slack = true) const {
    if (steps == 0) return 0.0;
    int bad = 0;
    for (int k = 0; k < steps; ++k)
      for (int v = 0; v < vehicles; ++v)
        if (second_moment(k, v) > bnd(k, v) + (with_slack ? mc_slack(k, v) : 0.0)) ++bad;
    return static_cast<double>(bad) / (steps * vehicles);
  }
  /// Count of samples with squared error above multiplier * bound.
  int violation_count(double multiplier) const {
    int bad = 0;
    for (int r = 0; r < runs; ++r)
      for (int k = 0; k < steps; ++k)
        for (int v = 0; v < vehicles; ++v)
          if (sq(r, k, v) > multiplier * bnd(k, v)) ++bad;
    return bad;
  }
  std::vector<double> rmse() const {
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
      double acc = 0;
      for (int v = 0; v < vehicles; ++v) acc += second_moment(k, v);
      out[static_cast<std::size_t>(k)] = std::sqrt(acc / vehicles);
    }
    return out;
  }
  double mean_bound() const {
    if (bound.empty()) return 0.0;
    double acc = 0;
    for (double b : bound) acc += b;
    return acc / static_cast<double>(bound.size());
  }

 private:
  std::size_t idx(int r, int k, int v) const {
    return static_cast<std::size_t>((r * steps + k) * vehicles + v);
  }
};

inline SimMetrics run(const NetworkScenario& scenario, SimMethod method, const Tolerances& tol = {}) {
  NetworkScenario s = scenario;
  s.validate();
  SimMetrics m;
  m.method = method;
  m.runs = s.monte_carlo_runs;
  m.steps = s.steps;
  m.vehicles = s.vehicle_count;
  const auto cells = static_cast<std::size_t>(m.runs) * static_cast<std::size_t>(m.steps) *
                     static_cast<std::size_t>(m.vehicles);
  m.sq_error.assign(cells, 0.0);
  m.error.assign(cells, 0.0);
  if (s.steps == 0) return m;
  const auto plans = plan_run(s, method, tol);
  for (int k = 0; k < s.steps; ++k)
    for (int v = 0; v < s.vehicle_count; ++v)
      m.bound.push_back(plans[static_cast<std::size_t>(k)].fusion[static_cast<std::size_t>(v)].bound);

  const auto n = static_cast<std::size_t>(s.vehicle_count);
  for (int r = 0; r < s.monte_carlo_runs; ++r) {
    std::vector<std::mt19937_64> streams;
    for (int v = 0; v < s.vehicle_count; ++v) streams.push_back(vehicle_stream(s.seed, r, v));
    RunState st;
    st.truth = s.initial_truth;
    st.estimate.resize(n);
    for (std::size_t v = 0; v < n; ++v) {
      std::normal_distribution<double> nd(0.0, std::sqrt(s.initial_bound[v]));
      st.estimate[v] = st.truth[v] + nd(streams[v]);
    }
    for (int k = 0; k < s.steps; ++k) {
      step(s, plans[static_cast<std::size_t>(k)], st, streams);
      for (int v = 0; v < s.vehicle_count; ++v) {
        const double e = st.estimate[static_cast<std::size_t>(v)] - st.truth[static_cast<std::size_t>(v)];
        const auto id = static_cast<std::size_t>((r * s.steps + k) * s.vehicle_count + v);
        m.error[id] = e;
        m.sq_error[id] = e * e;
      }
    }
  }
  return m;
}

}  // namespace oci
