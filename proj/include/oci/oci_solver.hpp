#pragma once

// Kahan-family OCI fusion as a semidefinite program over (U, B, omega):
//
//   min J(B)  s.t.  [B  I; I  G - U] >= 0,
//                   [U  E; E^T  sum_b w_b Y_b + C^T R^-1 C] >= 0,  w in simplex,
//
// with G = H^T R^-1 H and E = H^T R^-1 C. The optional projection bound adds
// [M D; D^T Y(w)] >= 0 and gamma * G(M) to the objective.

#include "oci/conic.hpp"
#include "oci/feasibility.hpp"

#include <optional>
#include <string>
#include <vector>

namespace oci {

enum class Objective { Trace, LogDet };

inline std::string to_string(Objective o) { return o == Objective::Trace ? "trace" : "logdet"; }

struct ProjectionBoundRequest {
  Matrix D;
  double gamma = 0.0;  // <= 0 selects the default weight
  Objective g_kind = Objective::Trace;
};

using SolveStatus = ConicStatus;

struct FusionSolution {
  SolveStatus status = SolveStatus::NumericalTrouble;
  Matrix K;
  Matrix B;
  SimplexWeights omega;
  Matrix Y;
  Matrix U;
  std::optional<Matrix> M;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  double gamma = 0.0;
  double scale = 1.0;  // data were divided by this before solving
  SolveStatus sdp_status = SolveStatus::NumericalTrouble;  // raw backend verdict
  FeasibilityReport feasibility;
  std::string diagnostics;

  bool ok() const { return status == SolveStatus::Optimal; }
};

/// Matrices shared by the closed forms.
struct ProblemTerms {
  Matrix G;    // H^T R^-1 H
  Matrix E;    // H^T R^-1 C
  Matrix Crc;  // C^T R^-1 C
  Matrix Rinv;
  std::vector<InverseBound> Ys;

  explicit ProblemTerms(const FusionProblem& p, const Tolerances& tol = {}) {
    const Eigen::LLT<Matrix> llt(p.R().matrix());
    const Matrix RiH = llt.solve(p.H());
    const Matrix RiC = llt.solve(p.C());
    G = SymMatrix(p.H().transpose() * RiH).matrix();
    E = p.H().transpose() * RiC;
    Crc = SymMatrix(p.C().transpose() * RiC).matrix();
    Rinv = SymMatrix(llt.solve(Matrix::Identity(p.o(), p.o()))).matrix();
    Ys = inverse_bounds(p.info(), tol);
  }
};

/// Gain, certificate and bound for a fixed inverse bound Y.
struct KahanPoint {
  Matrix U;  // E (Y + C^T R^-1 C)^+ E^T
  Matrix Q;  // R^-1 - R^-1 C (Y + C^T R^-1 C)^+ C^T R^-1
  Matrix K;
  Matrix B;  // (G - U)^-1 = (H^T Q H)^-1
};

inline KahanPoint kahan_point(const FusionProblem& p, const ProblemTerms& t, const Matrix& Y,
                              const Tolerances& tol = {}) {
  const Matrix Zp = pinv(SymMatrix(Y + t.Crc), tol).matrix();
  const Eigen::LLT<Matrix> rl(p.R().matrix());
  const Matrix RiC = rl.solve(p.C());
  KahanPoint k;
  k.U = SymMatrix(t.E * Zp * t.E.transpose()).matrix();
  k.Q = SymMatrix(t.Rinv - RiC * Zp * RiC.transpose()).matrix();
  const Matrix inner = SymMatrix(p.H().transpose() * k.Q * p.H()).matrix();
  const RankInfo ri = rank_info_against(inner, SymMatrix(t.G).max_eigenvalue(), tol);
  Eigen::LLT<Matrix> il(inner);
  if (ri.rank < p.n() || il.info() != Eigen::Success)
    throw Error("recover_gain: H^T Q H is singular for this Y (infeasible)");
  k.B = SymMatrix(il.solve(Matrix::Identity(p.n(), p.n()))).matrix();
  k.K = il.solve(p.H().transpose() * k.Q);
  return k;
}

/// K = (H^T Q H)^-1 H^T Q with Q from the given inverse bound.
inline Matrix recover_gain(const FusionProblem& p, const Matrix& Y, const Tolerances& tol = {}) {
  return kahan_point(p, ProblemTerms(p, tol), Y, tol).K;
}

struct Reconstruction {
  Matrix Y;
  Matrix U;
  Matrix B;
};

/// Map an unbiased gain and a valid bound back to certificate variables; the
/// returned B never exceeds the input in the objective.
inline Reconstruction reconstruct_from_gain(const FusionProblem& p, const Matrix& K, const Matrix& B,
                                            const Tolerances& tol = {}) {
  if (K.rows() != p.n() || K.cols() != p.o()) throw Error("reconstruct: K has wrong shape");
  if ((K * p.H() - Matrix::Identity(p.n(), p.n())).norm() > tol.tol_check)
    throw Error("reconstruct: gain is not unbiased");
  const SymMatrix slack(B - K * p.R().matrix() * K.transpose());
  if (slack.min_eigenvalue() < -tol.tol_check)
    throw Error("reconstruct: B - K R K^T is not PSD");
  const ProblemTerms t(p, tol);
  const Matrix KC = K * p.C();
  Reconstruction r;
  r.Y = SymMatrix(KC.transpose() * pinv(slack, tol).matrix() * KC).matrix();
  r.U = SymMatrix(t.E * pinv(SymMatrix(r.Y + t.Crc), tol).matrix() * t.E.transpose()).matrix();
  r.B = inverse_pd(SymMatrix(t.G - r.U), "G - U").matrix();
  return r;
}

inline double objective_of(Objective kind, const Matrix& B) {
  if (kind == Objective::Trace) return B.trace();
  Eigen::LLT<Matrix> llt(B);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

/// Symmetric vectorization: lower triangle by columns, off-diagonals scaled by sqrt(2).
inline int svec_size(Eigen::Index k) { return static_cast<int>(k * (k + 1) / 2); }

inline Matrix svec_basis(Eigen::Index k, int idx) {
  int c = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = j; i < k; ++i, ++c)
      if (c == idx) {
        Matrix E = Matrix::Zero(k, k);
        if (i == j) {
          E(i, i) = 1.0;
        } else {
          E(i, j) = E(j, i) = 1.0 / std::sqrt(2.0);
        }
        return E;
      }
  throw Error("svec_basis: index out of range");
}

inline Vector svec(const Matrix& S) {
  const Eigen::Index k = S.rows();
  Vector v(svec_size(k));
  int c = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = j; i < k; ++i) v(c++) = (i == j) ? S(i, i) : std::sqrt(2.0) * S(i, j);
  return v;
}

inline Matrix smat(const Vector& v, Eigen::Index k) {
  Matrix S(k, k);
  int c = 0;
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = j; i < k; ++i) {
      const double x = v(c++);
      if (i == j) {
        S(i, i) = x;
      } else {
        S(i, j) = S(j, i) = x / std::sqrt(2.0);
      }
    }
  return S;
}

/// Where each matrix variable lives in the program's decision vector.
struct SdpLayout {
  int u_offset = 0;
  int b_offset = -1;  // trace objective only
  int m_offset = -1;  // M (trace G) or N = M^-1 (logdet G)
  int w_offset = 0;
  Eigen::Index n = 0;
  Eigen::Index d = 0;
  Eigen::Index M = 0;
};

struct SdpEncoding {
  ConicProgram program;
  SdpLayout layout;
  double scale = 1.0;
  double gamma = 0.0;
};

namespace detail {

inline Matrix embed(Eigen::Index size, Eigen::Index r0, Eigen::Index c0, const Matrix& a) {
  Matrix F = Matrix::Zero(size, size);
  F.block(r0, c0, a.rows(), a.cols()) = a;
  if (r0 != c0) F.block(c0, r0, a.cols(), a.rows()) = a.transpose();
  return F;
}

/// Problem scale: trace of the uniform-weight bound per state, else mean of diag R.
inline double problem_scale(const FusionProblem& p, const ProblemTerms& t, const Tolerances& tol) {
  try {
    const Matrix Yu = kahan_combine(t.Ys, SimplexWeights::uniform(p.info().size()));
    const double s = kahan_point(p, t, Yu, tol).B.trace() / static_cast<double>(p.n());
    if (std::isfinite(s) && s > 0) return s;
  } catch (const Error&) {
  }
  return p.R().matrix().trace() / static_cast<double>(p.o());
}

inline void validate_request(const FusionProblem& p, const ProjectionBoundRequest& req,
                             const Tolerances& tol) {
  if (req.D.cols() != p.m() || req.D.rows() < 1) throw Error("projection: D must be d x m");
  for (Eigen::Index i = 0; i < req.D.rows(); ++i)
    if (req.D.row(i).cwiseAbs().maxCoeff() == 0.0)
      throw Error("projection: D has an all-zero row");
  if (!cpc_bounded(p.info(), req.D, tol))
    throw Error("NoProjectionBound: rank(W) != rank([W; D])");
  if (req.g_kind == Objective::LogDet && rank_tol(req.D, tol) != req.D.rows())
    throw Error("projection: log-det bound needs D with full row rank");
}

inline double default_gamma(const FusionProblem& p, const ProblemTerms& t, Objective obj,
                            const ProjectionBoundRequest& req, const Tolerances& tol) {
  if (req.gamma > 0) return req.gamma;
  if (obj == Objective::LogDet && req.g_kind == Objective::LogDet) return 1e-6;
  try {
  const Matrix Yu = kahan_combine(t.Ys, SimplexWeights::uniform(p.info().size()));
  const double tb = obj == Objective::Trace ? kahan_point(p, t, Yu, tol).B.trace() : 1.0;
  if (req.g_kind == Objective::LogDet) return 1e-6 * tb;
  const double tm =
      (req.D * pinv(SymMatrix(Yu), tol).matrix() * req.D.transpose()).trace();
  return 1e-6 * tb / std::max(tm, 1e-300);
  } catch (const Error&) {
    return 1e-6;
  }
}

}  // namespace detail

namespace detail {

/// Interior point at uniform weights: the whitened U sits halfway to its gap, B = 2 (gap - U)^-1.
/// Empty when G - U(omega_u) is singular (then no strictly feasible point exists).
inline std::optional<Vector> uniform_start(const SdpEncoding& enc, const Matrix& gap, const Matrix& Yu,
                                           const Matrix& V3,
                                           const std::optional<ProjectionBoundRequest>& req) {
  const auto& L = enc.layout;
  const Eigen::Index n = L.n;
  Eigen::LLT<Matrix> gl(gap);
  if (gl.info() != Eigen::Success || SymMatrix(gap).min_eigenvalue() <= 1e-12 * std::max(1.0, gap.norm()))
    return std::nullopt;
  Vector x = Vector::Zero(enc.program.num_vars);
  x.segment(L.u_offset, svec_size(n)) = svec(Matrix(0.5 * gap));
  if (L.b_offset >= 0) {
    const Matrix B = 4.0 * gl.solve(Matrix::Identity(n, n));
    x.segment(L.b_offset, svec_size(n)) = svec(B);
  }
  if (req) {
    const Eigen::Index d = L.d;
    const Matrix DV = req->D * V3;
    const Matrix Yr = SymMatrix(V3.transpose() * Yu * V3).matrix();
    Eigen::LLT<Matrix> yl(Yr);
    if (yl.info() != Eigen::Success) return std::nullopt;
    Matrix Mx;
    if (req->g_kind == Objective::Trace) {
      const Matrix A = SymMatrix(DV * yl.solve(DV.transpose())).matrix();
      Mx = 2.0 * A + (A.trace() / static_cast<double>(d) + 1e-12) * Matrix::Identity(d, d);
    } else {
      const double lo = SymMatrix(Yr).min_eigenvalue();
      const double hi = SymMatrix(Matrix(DV.transpose() * DV)).max_eigenvalue();
      Mx = (0.5 * lo / std::max(hi, 1e-300)) * Matrix::Identity(d, d);
    }
    x.segment(L.m_offset, svec_size(d)) = svec(Mx);
  }
  x.segment(L.w_offset, L.M).setConstant(1.0 / static_cast<double>(L.M));
  return x;
}

}  // namespace detail

/// Standard-form encoding. Data are divided by the problem scale; variables
/// are ordered whitened U - U(omega_u), whitened B (trace), M or M^-1 (projection), omega.
inline SdpEncoding encode_sdp(const FusionProblem& p, Objective obj,
                              const std::optional<ProjectionBoundRequest>& req = std::nullopt,
                              const Tolerances& tol = {}) {
  const ProblemTerms terms(p, tol);
  SdpEncoding enc;
  enc.scale = detail::problem_scale(p, terms, tol);
  const double s = enc.scale;
  if (req) {
    detail::validate_request(p, *req, tol);
    enc.gamma = detail::default_gamma(p, terms, obj, *req, tol);
  }
  // Normalized data: R/s and X/s, so G, E, C^T R^-1 C and Y_b scale by s.
  const Matrix G = terms.G * s;
  const Matrix E = terms.E * s;
  const Matrix Crc = terms.Crc * s;
  std::vector<Matrix> Ys;
  for (const auto& y : terms.Ys) Ys.push_back(y.matrix() * s);

  const Eigen::Index n = p.n();
  const Eigen::Index Mb = p.info().size();
  const Matrix W = stacked_W(p.info());
  // Facial reduction onto ranges that strictly feasible points can reach.
  const Matrix V2 = range_basis(SymMatrix(W.transpose() * W + p.C().transpose() * p.C()).matrix(), tol);
  const Eigen::Index r2 = V2.cols();
  // The SDP variable is U - U(omega_u), and the Kahan block is congruence-transformed
  // with the Cholesky factor of its uniform-weight corner. Entries then stay O(1)
  // even when R is tiny and G, E, C^T R^-1 C are huge.
  Matrix Yu = Matrix::Zero(p.m(), p.m());
  for (const auto& y : Ys) Yu += y / static_cast<double>(Ys.size());
  const Matrix Ev = E * V2;
  Eigen::LLT<Matrix> z0(SymMatrix(V2.transpose() * (Yu + Crc) * V2).matrix());
  if (z0.info() != Eigen::Success) throw Error("encode_sdp: reduced Kahan corner is not positive definite");
  const Matrix Lz = z0.matrixL();
  const Matrix Pz = z0.solve(Ev.transpose()).transpose();  // E V2 Z0^-1
  const Matrix gap = SymMatrix(G - Pz * Ev.transpose()).matrix();
  // U and B are further whitened by S = gap^1/2: U = S U~ S, B = S^-1 B~ S^-1.
  Matrix Sinv = Matrix::Identity(n, n);
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(gap);
    const Vector ev = es.eigenvalues();
    if (ev.minCoeff() > 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff())) Sinv = es.operatorInverseSqrt();
  }
  const Matrix gap_w = SymMatrix(Sinv * gap * Sinv).matrix();
  const Matrix Binv_w = SymMatrix(Sinv * Sinv).matrix();  // objective weight on B~
  Matrix J(n + r2, r2);
  J.topRows(n) = Sinv * Pz;
  J.bottomRows(r2) = -Lz.triangularView<Eigen::Lower>().solve(Matrix::Identity(r2, r2));

  auto& prog = enc.program;
  auto& L = enc.layout;
  L.n = n;
  L.M = Mb;
  int nv = 0;
  L.u_offset = nv;
  nv += svec_size(n);
  if (obj == Objective::Trace) {
    L.b_offset = nv;
    nv += svec_size(n);
  }
  Matrix V3;
  if (req) {
    L.d = req->D.rows();
    L.m_offset = nv;
    nv += svec_size(L.d);
    V3 = range_basis(W.transpose(), tol);
  }
  L.w_offset = nv;
  nv += static_cast<int>(Mb);
  prog.num_vars = nv;
  prog.c = Vector::Zero(nv);
  for (int i = 0; i < svec_size(n); ++i) prog.var_names.push_back("U" + std::to_string(i));
  if (L.b_offset >= 0)
    for (int i = 0; i < svec_size(n); ++i) prog.var_names.push_back("B" + std::to_string(i));
  if (L.m_offset >= 0)
    for (int i = 0; i < svec_size(L.d); ++i)
      prog.var_names.push_back((req->g_kind == Objective::Trace ? "M" : "Minv") + std::to_string(i));
  for (Eigen::Index b = 0; b < Mb; ++b) prog.var_names.push_back("w" + std::to_string(b));

  const Matrix In = Matrix::Identity(n, n);
  if (obj == Objective::Trace) {
    LmiBlock blk;
    blk.name = "gain";
    blk.F0 = Matrix::Zero(2 * n, 2 * n);
    blk.F0.block(0, n, n, n) = In;
    blk.F0.block(n, 0, n, n) = In;
    blk.F0.block(n, n, n, n) = gap_w;
    for (int i = 0; i < svec_size(n); ++i)
      blk.terms.emplace_back(L.u_offset + i, detail::embed(2 * n, n, n, -svec_basis(n, i)));
    for (int i = 0; i < svec_size(n); ++i) {
      blk.terms.emplace_back(L.b_offset + i, detail::embed(2 * n, 0, 0, svec_basis(n, i)));
      prog.c(L.b_offset + i) = Binv_w.cwiseProduct(svec_basis(n, i)).sum();
    }
    prog.blocks.push_back(std::move(blk));
  } else {
    LmiBlock blk;
    blk.name = "information";
    blk.F0 = gap_w;
    for (int i = 0; i < svec_size(n); ++i) blk.terms.emplace_back(L.u_offset + i, -svec_basis(n, i));
    blk.logdet_weight = 1.0;
    prog.blocks.push_back(std::move(blk));
  }
  {
    LmiBlock blk;
    blk.name = "kahan";
    const Eigen::Index sz = n + r2;
    blk.F0 = Matrix::Zero(sz, sz);
    blk.F0.block(n, n, r2, r2).setIdentity();
    for (int i = 0; i < svec_size(n); ++i)
      blk.terms.emplace_back(L.u_offset + i, detail::embed(sz, 0, 0, svec_basis(n, i)));
    // On sum(omega) = 1, Y(omega) - Y_u = sum_b omega_b (Y_b - Y_u).
    for (Eigen::Index b = 0; b < Mb; ++b) {
      const Matrix Db = V2.transpose() * (Ys[static_cast<std::size_t>(b)] - Yu) * V2;
      blk.terms.emplace_back(L.w_offset + static_cast<int>(b), SymMatrix(Matrix(J * Db * J.transpose())).matrix());
    }
    prog.blocks.push_back(std::move(blk));
  }
  if (req) {
    const Eigen::Index d = L.d;
    const Eigen::Index r3 = V3.cols();
    const Matrix DV = req->D * V3;
    if (req->g_kind == Objective::Trace) {
      LmiBlock blk;
      blk.name = "projection";
      const Eigen::Index sz = d + r3;
      blk.F0 = Matrix::Zero(sz, sz);
      blk.F0.block(0, d, d, r3) = DV;
      blk.F0.block(d, 0, r3, d) = DV.transpose();
      for (int i = 0; i < svec_size(d); ++i) {
        blk.terms.emplace_back(L.m_offset + i, detail::embed(sz, 0, 0, svec_basis(d, i)));
        prog.c(L.m_offset + i) = enc.gamma * svec_basis(d, i).trace();
      }
      for (Eigen::Index b = 0; b < Mb; ++b)
        blk.terms.emplace_back(L.w_offset + static_cast<int>(b),
                               detail::embed(sz, d, d, V3.transpose() * Ys[b] * V3));
      prog.blocks.push_back(std::move(blk));
    } else {
      LmiBlock blk;
      blk.name = "projection";
      blk.F0 = Matrix::Zero(r3, r3);
      for (int i = 0; i < svec_size(d); ++i)
        blk.terms.emplace_back(L.m_offset + i, -DV.transpose() * svec_basis(d, i) * DV);
      for (Eigen::Index b = 0; b < Mb; ++b)
        blk.terms.emplace_back(L.w_offset + static_cast<int>(b), V3.transpose() * Ys[b] * V3);
      prog.blocks.push_back(std::move(blk));
      LmiBlock nb;
      nb.name = "projection_inverse";
      nb.F0 = Matrix::Zero(d, d);
      for (int i = 0; i < svec_size(d); ++i) nb.terms.emplace_back(L.m_offset + i, svec_basis(d, i));
      nb.logdet_weight = enc.gamma;
      prog.blocks.push_back(std::move(nb));
    }
  }
  for (Eigen::Index b = 0; b < Mb; ++b) {
    LinearInequality q;
    q.coef.emplace_back(L.w_offset + static_cast<int>(b), 1.0);
    prog.inequalities.push_back(std::move(q));
  }
  prog.A = Matrix::Zero(1, nv);
  prog.A.block(0, L.w_offset, 1, Mb).setOnes();
  prog.b = Vector::Ones(1);
  prog.ball_radius = 10.0 * (static_cast<double>(n) + G.norm() + Crc.norm());
  prog.start = detail::uniform_start(enc, gap_w, Yu, V3, req);
  return enc;
}

namespace detail {

inline FusionSolution solve_impl(const FusionProblem& p, Objective obj,
                                 const std::optional<ProjectionBoundRequest>& req,
                                 const Tolerances& tol, const ConicBackend& backend) {
  tol.validate();
  FusionSolution sol;
  sol.feasibility = analyze(p, tol);
  if (!sol.feasibility.h_full_rank) {
    sol.status = sol.sdp_status = SolveStatus::Infeasible;
    sol.diagnostics = "H is not full column rank";
    return sol;
  }
  const SdpEncoding enc = encode_sdp(p, obj, req, tol);
  sol.scale = enc.scale;
  sol.gamma = enc.gamma;
  ConicOptions opt;
  opt.tol_gap = tol.tol_solve;
  opt.tol_accept = tol.tol_check;
  const ConicResult res = backend.solve(enc.program, opt);
  sol.sdp_status = res.status;
  sol.diagnostics = to_string(res.status) + ": " + res.diagnostics;

  const bool cond = sol.feasibility.oci_feasible;
  if (res.status == ConicStatus::Infeasible) {
    sol.status = cond ? SolveStatus::NumericalTrouble : SolveStatus::Infeasible;
    if (cond) sol.diagnostics += " (disagrees with the rank condition)";
    return sol;
  }
  if (res.status != ConicStatus::Optimal) {
    sol.status = SolveStatus::NumericalTrouble;
    return sol;
  }
  if (!cond) {
    sol.status = SolveStatus::NumericalTrouble;
    sol.diagnostics += " (solver found a point but the rank condition fails)";
    return sol;
  }

  // Complete the solution in closed form at the optimal weights.
  const auto& L = enc.layout;
  try {
    sol.omega = SimplexWeights::cleaned(res.x.segment(L.w_offset, L.M));
    const ProblemTerms terms(p, tol);
    sol.Y = kahan_combine(terms.Ys, sol.omega);
    const KahanPoint kp = kahan_point(p, terms, sol.Y, tol);
    sol.U = kp.U;
    sol.B = kp.B;
    sol.K = kp.K;
    sol.objective_value = objective_of(obj, sol.B);
    if (req) {
      const Matrix W = stacked_W(p.info());
      const Matrix V3 = range_basis(W.transpose(), tol);
      const Matrix DV = req->D * V3;
      const Matrix Yr = SymMatrix(V3.transpose() * sol.Y * V3).matrix();
      Eigen::LLT<Matrix> yl(Yr);
      Matrix M;
      if (yl.info() == Eigen::Success) {
        M = DV * yl.solve(DV.transpose());
      } else {
        M = req->D * pinv(SymMatrix(sol.Y), tol).matrix() * req->D.transpose();
      }
      sol.M = SymMatrix(M).matrix();
      sol.objective_value += enc.gamma * objective_of(req->g_kind, *sol.M);
    }
  } catch (const Error& e) {
    sol.status = SolveStatus::NumericalTrouble;
    sol.diagnostics += std::string(" completion failed: ") + e.what();
    return sol;
  }
  sol.status = SolveStatus::Optimal;
  return sol;
}

}  // namespace detail

inline FusionSolution solve_kahan_oci(const FusionProblem& p, Objective obj = Objective::Trace,
                                      const Tolerances& tol = {},
                                      const ConicBackend& backend = BarrierBackend{}) {
  return detail::solve_impl(p, obj, std::nullopt, tol, backend);
}

inline FusionSolution solve_with_projection_bound(const FusionProblem& p, Objective obj,
                                                  const ProjectionBoundRequest& req,
                                                  const Tolerances& tol = {},
                                                  const ConicBackend& backend = BarrierBackend{}) {
  return detail::solve_impl(p, obj, req, tol, backend);
}

}  // namespace oci
