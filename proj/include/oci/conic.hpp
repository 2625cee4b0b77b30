#pragma once

// Small dense conic programs over symmetric PSD cones, plus a log-barrier
// interior-point backend.
//
//   minimize    c^T x - sum_j w_j logdet F_j(x)
//   subject to  F_j(x) = F_j0 + sum_i x_i F_ji  >= 0   (PSD)
//               a_k^T x + b_k >= 0
//               A x = b

#include "oci/sym_core.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oci {

struct LmiBlock {
  std::string name;
  Matrix F0;
  std::vector<std::pair<int, Matrix>> terms;  // (variable index, coefficient), indices increasing
  double logdet_weight = 0.0;                 // contributes -w logdet F(x) to the objective

  Eigen::Index size() const { return F0.rows(); }

  Matrix evaluate(const Vector& x) const {
    Matrix F = F0;
    for (const auto& [i, Fi] : terms)
      if (x(i) != 0.0) F += x(i) * Fi;
    return F;
  }

  bool operator==(const LmiBlock&) const = default;
};

struct LinearInequality {
  std::vector<std::pair<int, double>> coef;
  double constant = 0.0;

  double evaluate(const Vector& x) const {
    double v = constant;
    for (const auto& [i, a] : coef) v += a * x(i);
    return v;
  }
  bool operator==(const LinearInequality&) const = default;
};

struct ConicProgram {
  int num_vars = 0;
  std::vector<std::string> var_names;
  Vector c;
  std::vector<LmiBlock> blocks;
  std::vector<LinearInequality> inequalities;
  Matrix A;  // equality rows, num_vars columns
  Vector b;
  double ball_radius = 1e6;  // bounds the phase-one search region
  std::optional<Vector> start;  // strictly feasible hint; phase one runs if it is not

  int barrier_degree() const {
    int d = static_cast<int>(inequalities.size());
    for (const auto& blk : blocks) d += static_cast<int>(blk.size());
    return d;
  }

  double objective(const Vector& x) const {
    double f = c.dot(x);
    for (const auto& blk : blocks) {
      if (blk.logdet_weight == 0.0) continue;
      Eigen::LLT<Matrix> llt(blk.evaluate(x));
      if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
      f -= blk.logdet_weight * 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }
    return f;
  }

  bool operator==(const ConicProgram& o) const {
    return num_vars == o.num_vars && var_names == o.var_names && c == o.c &&
           blocks == o.blocks && inequalities == o.inequalities && A == o.A && b == o.b &&
           ball_radius == o.ball_radius && start == o.start;
  }
};

enum class ConicStatus { Optimal, Infeasible, NumericalTrouble };

inline std::string to_string(ConicStatus s) {
  switch (s) {
    case ConicStatus::Optimal: return "optimal";
    case ConicStatus::Infeasible: return "infeasible";
    case ConicStatus::NumericalTrouble: return "numerical_trouble";
  }
  return "unknown";
}

struct ConicOptions {
  double tol_gap = 1e-9;       // relative duality-gap target
  double tol_accept = 1e-6;    // accepted gap if progress stalls
  double feas_eps = 1e-9;      // phase-one margin deciding (in)feasibility
  double mu = 20.0;
  int max_outer = 80;
  int max_newton = 200;
};

struct ConicResult {
  ConicStatus status = ConicStatus::NumericalTrouble;
  Vector x;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::infinity();
  double phase1_value = std::numeric_limits<double>::quiet_NaN();
  int newton_steps = 0;
  std::string diagnostics;
};

/// Interface so the encoding can be paired with other solvers.
class ConicBackend {
 public:
  virtual ~ConicBackend() = default;
  virtual ConicResult solve(const ConicProgram& prog, const ConicOptions& opt) const = 0;
};

namespace detail {

/// State of one barrier subproblem: t * f0(x) + barrier(x).
class BarrierProblem {
 public:
  BarrierProblem(const ConicProgram& prog, int ball_vars) : prog_(prog), ball_vars_(ball_vars) {}

  void set_t(double t) { t_ = t; }

  double value(const Vector& x) const {
    double f = t_ * prog_.c.dot(x);
    for (const auto& blk : prog_.blocks) {
      Eigen::LLT<Matrix> llt(blk.evaluate(x));
      if (llt.info() != Eigen::Success) return inf();
      const Vector d = llt.matrixLLT().diagonal();
      if ((d.array() <= 0).any()) return inf();
      f -= (1.0 + t_ * blk.logdet_weight) * 2.0 * d.array().log().sum();
    }
    for (const auto& ineq : prog_.inequalities) {
      const double g = ineq.evaluate(x);
      if (!(g > 0)) return inf();
      f -= std::log(g);
    }
    if (ball_vars_ > 0) {
      const double r = prog_.ball_radius * prog_.ball_radius - x.head(ball_vars_).squaredNorm();
      if (!(r > 0)) return inf();
      f -= std::log(r);
    }
    return std::isfinite(f) ? f : inf();
  }

  bool derivatives(const Vector& x, Vector& g, Matrix& H) const {
    const int n = prog_.num_vars;
    g = t_ * prog_.c;
    H = Matrix::Zero(n, n);
    for (const auto& blk : prog_.blocks) {
      Eigen::LLT<Matrix> llt(blk.evaluate(x));
      if (llt.info() != Eigen::Success) return false;
      const double w = 1.0 + t_ * blk.logdet_weight;
      const auto L = llt.matrixL();
      std::vector<Matrix> Ahat;
      Ahat.reserve(blk.terms.size());
      for (const auto& [i, Fi] : blk.terms) {
        Matrix T = L.solve(Fi);
        T = L.solve(T.transpose().eval());
        Ahat.push_back(std::move(T));
      }
      for (std::size_t p = 0; p < blk.terms.size(); ++p) {
        const int i = blk.terms[p].first;
        g(i) -= w * Ahat[p].trace();
        for (std::size_t q = 0; q <= p; ++q) {
          const int j = blk.terms[q].first;
          const double h = w * Ahat[p].cwiseProduct(Ahat[q].transpose()).sum();
          H(i, j) += h;
          if (i != j) H(j, i) += h;
        }
      }
    }
    for (const auto& ineq : prog_.inequalities) {
      const double v = ineq.evaluate(x);
      if (!(v > 0)) return false;
      for (const auto& [i, a] : ineq.coef) {
        g(i) -= a / v;
        for (const auto& [j, b] : ineq.coef) H(i, j) += a * b / (v * v);
      }
    }
    if (ball_vars_ > 0) {
      const Vector y = x.head(ball_vars_);
      const double r = prog_.ball_radius * prog_.ball_radius - y.squaredNorm();
      if (!(r > 0)) return false;
      g.head(ball_vars_) += 2.0 * y / r;
      H.topLeftCorner(ball_vars_, ball_vars_) +=
          (2.0 / r) * Matrix::Identity(ball_vars_, ball_vars_) + (4.0 / (r * r)) * y * y.transpose();
    }
    return true;
  }

 private:
  static double inf() { return std::numeric_limits<double>::infinity(); }

  const ConicProgram& prog_;
  int ball_vars_;
  double t_ = 1.0;
};

enum class CenterOutcome { Converged, Stalled, Failed };

/// Equality-constrained Newton centering in the null space Z of A.
inline CenterOutcome center(const BarrierProblem& bp, const Matrix& Z, Vector& x, int max_steps,
                            int& steps) {
  Vector g;
  Matrix H;
  for (int it = 0; it < max_steps; ++it) {
    if (!bp.derivatives(x, g, H)) return CenterOutcome::Failed;
    const Vector gz = Z.transpose() * g;
    Matrix Hz = Z.transpose() * H * Z;
    Hz = 0.5 * (Hz + Hz.transpose());
    Eigen::LLT<Matrix> llt(Hz);
    Vector dz;
    if (llt.info() == Eigen::Success) {
      dz = -llt.solve(gz);
    } else {
      const double reg = 1e-14 * std::max(1.0, Hz.diagonal().cwiseAbs().maxCoeff());
      Eigen::LDLT<Matrix> ldlt(Hz + reg * Matrix::Identity(Hz.rows(), Hz.cols()));
      dz = -ldlt.solve(gz);
      if (!dz.allFinite()) return CenterOutcome::Failed;
    }
    const double lambda2 = -gz.dot(dz);
    ++steps;
    if (!(lambda2 >= 0) || !std::isfinite(lambda2)) return CenterOutcome::Failed;
    if (lambda2 / 2.0 <= 1e-10) return CenterOutcome::Converged;
    const Vector dx = Z * dz;
    const double f0 = bp.value(x);
    double alpha = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 80; ++ls) {
      if (f0 - 0.25 * alpha * lambda2 >= f0) break;  // below resolution of f
      const Vector xn = x + alpha * dx;
      const double fn = bp.value(xn);
      if (std::isfinite(fn) && fn <= f0 - 0.25 * alpha * lambda2) {
        x = xn;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Round-off dominates the Armijo test once the decrement is tiny.
      return lambda2 < 1e-6 ? CenterOutcome::Converged : CenterOutcome::Stalled;
    }
  }
  return CenterOutcome::Stalled;
}

inline Matrix null_space_of(const Matrix& A, int n) {
  if (A.rows() == 0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  Eigen::Index r = 0;
  const Vector& s = svd.singularValues();
  while (r < s.size() && s(r) > 1e-12 * s(0)) ++r;
  return svd.matrixV().rightCols(n - r);
}

inline double min_slack(const ConicProgram& prog, const Vector& x) {
  double s = std::numeric_limits<double>::infinity();
  for (const auto& blk : prog.blocks) s = std::min(s, SymMatrix(blk.evaluate(x)).min_eigenvalue());
  for (const auto& ineq : prog.inequalities) s = std::min(s, ineq.evaluate(x));
  return s;
}

}  // namespace detail

/// Two-phase log-barrier method. Phase one minimizes a uniform shift s of all
/// cone constraints inside a ball; its optimum certifies (in)feasibility.
class BarrierBackend : public ConicBackend {
 public:
  ConicResult solve(const ConicProgram& prog, const ConicOptions& opt) const override {
    ConicResult res;
    std::ostringstream diag;
    const int n = prog.num_vars;

    // Least-norm point on the equality constraints.
    Vector x0 = Vector::Zero(n);
    if (prog.A.rows() > 0)
      x0 = prog.A.transpose() * (prog.A * prog.A.transpose()).ldlt().solve(prog.b);

    Vector x;
    const double slack0 = detail::min_slack(prog, x0);
    if (prog.start && prog.start->size() == n && detail::min_slack(prog, *prog.start) > 0 &&
        (prog.A.rows() == 0 || (prog.A * *prog.start - prog.b).norm() <= 1e-12 * (1.0 + prog.b.norm()))) {
      x = *prog.start;
      res.phase1_value = -detail::min_slack(prog, x);
    } else if (slack0 > std::max(opt.feas_eps, 1e-6)) {
      x = x0;
      res.phase1_value = -slack0;
    } else {
      const auto p1 = phase_one(prog, opt, x0, res.newton_steps, diag);
      res.phase1_value = p1.value;
      if (p1.status != ConicStatus::Optimal) {
        res.status = p1.status;
        res.diagnostics = diag.str();
        return res;
      }
      x = p1.x;
    }

    const Matrix Z = detail::null_space_of(prog.A, n);
    detail::BarrierProblem bp(prog, 0);
    const double theta = prog.barrier_degree();
    double t = 1.0;
    for (int outer = 0; outer < opt.max_outer; ++outer) {
      bp.set_t(t);
      Vector xt = x;
      const auto out = detail::center(bp, Z, xt, opt.max_newton, res.newton_steps);
      if (out == detail::CenterOutcome::Failed) {
        diag << "phase2: centering failed at t=" << t << "; ";
        break;
      }
      x = xt;
      const double f = prog.objective(x);
      res.gap = theta / t;
      res.objective = f;
      if (out == detail::CenterOutcome::Stalled) {
        diag << "phase2: centering stalled at t=" << t << "; ";
        break;
      }
      if (res.gap <= opt.tol_gap * std::max(1.0, std::abs(f))) {
        res.status = ConicStatus::Optimal;
        res.x = x;
        res.diagnostics = diag.str();
        return res;
      }
      t *= opt.mu;
    }
    res.x = x;
    res.objective = prog.objective(x);
    if (res.gap <= opt.tol_accept * (1.0 + std::abs(res.objective))) {
      res.status = ConicStatus::Optimal;
      diag << "accepted with gap " << res.gap;
    } else {
      res.status = ConicStatus::NumericalTrouble;
      diag << "gap " << res.gap << " above acceptance";
    }
    res.diagnostics = diag.str();
    return res;
  }

 private:
  struct PhaseOne {
    ConicStatus status = ConicStatus::NumericalTrouble;
    Vector x;
    double value = std::numeric_limits<double>::quiet_NaN();
  };

  static PhaseOne phase_one(const ConicProgram& prog, const ConicOptions& opt, const Vector& x0,
                            int& steps, std::ostringstream& diag) {
    const int n = prog.num_vars;
    ConicProgram aux;
    aux.num_vars = n + 1;
    aux.c = Vector::Zero(n + 1);
    aux.c(n) = 1.0;
    aux.ball_radius = prog.ball_radius;
    for (const auto& blk : prog.blocks) {
      LmiBlock b = blk;
      b.logdet_weight = 0.0;
      b.terms.emplace_back(n, Matrix::Identity(blk.size(), blk.size()));
      aux.blocks.push_back(std::move(b));
    }
    for (const auto& ineq : prog.inequalities) {
      LinearInequality q = ineq;
      q.coef.emplace_back(n, 1.0);
      aux.inequalities.push_back(std::move(q));
    }
    aux.A = Matrix::Zero(prog.A.rows(), n + 1);
    aux.A.leftCols(n) = prog.A;
    aux.b = prog.b;

    Vector x(n + 1);
    x.head(n) = x0;
    x(n) = std::max(0.0, -detail::min_slack(prog, x0)) + 1.0;

    const Matrix Z = detail::null_space_of(aux.A, n + 1);
    detail::BarrierProblem bp(aux, n);
    const double theta = aux.barrier_degree() + 1;
    double t = 1.0;
    PhaseOne r;
    for (int outer = 0; outer < opt.max_outer; ++outer) {
      bp.set_t(t);
      Vector xt = x;
      const auto out = detail::center(bp, Z, xt, opt.max_newton, steps);
      if (out == detail::CenterOutcome::Failed) {
        diag << "phase1: centering failed at t=" << t << "; ";
        break;
      }
      x = xt;
      const double s = x(n);

      r.value = s;
      if (s < -opt.feas_eps && (s < -1e-3 || out == detail::CenterOutcome::Stalled ||
                                theta / t <= -0.1 * s)) {
        // Strictly feasible with a comfortable margin.
        r.status = ConicStatus::Optimal;
        r.x = x.head(n);
        return r;
      }
      if (out == detail::CenterOutcome::Stalled) {
        diag << "phase1: stalled at t=" << t << " with shift " << s << "; ";
        break;
      }
      // Only a centered point gives the lower bound s - theta/t on the optimal shift.
      if (s - theta / t >= -opt.feas_eps) {
        r.status = ConicStatus::Infeasible;
        diag << "phase1: optimal shift " << s << " > 0; ";
        return r;
      }
      t *= opt.mu;
    }
    r.status = ConicStatus::NumericalTrouble;
    return r;
  }
};

}  // namespace oci
