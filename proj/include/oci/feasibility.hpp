#pragma once

// Boundedness and feasibility tests: rank conditions on W and [W; C], the
// sufficient condition, and the exact condition on
//   H^T R^-1 H - H^T R^-1 C (W^T W + C^T R^-1 C)^+ C^T R^-1 H.

#include "oci/problem.hpp"

#include <string>

namespace oci {

enum class FeasibilityReason { Feasible, HRankDeficient, ConditionFails };

inline std::string to_string(FeasibilityReason r) {
  switch (r) {
    case FeasibilityReason::Feasible: return "feasible";
    case FeasibilityReason::HRankDeficient: return "h_rank_deficient";
    case FeasibilityReason::ConditionFails: return "condition_fails";
  }
  return "unknown";
}

struct RankMargins {
  double p_bounded = 0;
  double cpc_bounded = 0;
  double h_rank = 0;
  double oci_feasible = 0;
};

struct FeasibilityReport {
  bool p_bounded = false;
  bool cpc_bounded = false;
  bool sufficient_feasible = false;
  bool oci_feasible = false;
  bool h_full_rank = false;
  FeasibilityReason reason = FeasibilityReason::ConditionFails;
  RankMargins rank_margins;
  bool borderline = false;  // some margin within a factor 10 of the cutoff
};

inline RankInfo p_bounded_info(const InfoStructure& info, const Tolerances& tol = {}) {
  return rank_info(stacked_W(info), tol);
}

inline bool p_bounded(const InfoStructure& info, const Tolerances& tol = {}) {
  return p_bounded_info(info, tol).rank == info.m();
}

/// rank(W) == rank([W; C]); margin is the smaller of the two rank margins.
inline std::pair<bool, double> cpc_bounded_info(const InfoStructure& info, const Matrix& C,
                                                const Tolerances& tol = {}) {
  if (C.cols() != info.m()) throw Error("cpc_bounded: C must have m columns");
  const Matrix W = stacked_W(info);
  Matrix WC(W.rows() + C.rows(), W.cols());
  WC << W, C;
  const RankInfo a = rank_info(W, tol);
  const RankInfo b = rank_info(WC, tol);
  // Full column rank of W already implies the equality in exact arithmetic.
  const bool ok = a.rank == info.m() || a.rank == b.rank;
  return {ok, std::min(a.margin, b.margin)};
}

inline bool cpc_bounded(const InfoStructure& info, const Matrix& C, const Tolerances& tol = {}) {
  return cpc_bounded_info(info, C, tol).first;
}

namespace detail {

/// Whitened factors of the condition matrix. With Hw = R^{-1/2} H and
/// Cw = R^{-1/2} C, the condition matrix equals F^T T^{-1} F where F = S^T Hw,
/// S spans the complement of col(Cw ker W) and T = S^T (I + Cw (W^T W)^+ Cw^T) S.
struct ConditionFactors {
  Matrix F;
  Matrix T;
  double h_scale = 0;
};

inline ConditionFactors condition_factors(const FusionProblem& p, const Tolerances& tol) {
  const Eigen::LLT<Matrix> llt(p.R().matrix());
  const Matrix Hw = llt.matrixL().solve(p.H());
  const Matrix Cw = llt.matrixL().solve(p.C());
  const Matrix W = stacked_W(p.info());
  const Matrix kerW = complement_basis(W.transpose(), tol);
  const Matrix S = complement_basis(Cw * kerW, tol);
  const Matrix Yp = pinv(SymMatrix(W.transpose() * W), tol).matrix();
  ConditionFactors f;
  f.F = S.transpose() * Hw;
  f.T = S.transpose() * (Matrix::Identity(p.o(), p.o()) + Cw * Yp * Cw.transpose()) * S;
  Eigen::JacobiSVD<Matrix> svd(Hw);
  f.h_scale = svd.singularValues()(0);
  return f;
}

}  // namespace detail

/// H^T R^-1 H - H^T R^-1 C (W^T W + C^T R^-1 C)^+ C^T R^-1 H, assembled from a
/// factored form so that it is PSD by construction.
inline Matrix condition_matrix(const FusionProblem& p, const Tolerances& tol = {}) {
  const auto f = detail::condition_factors(p, tol);
  if (f.F.rows() == 0) return Matrix::Zero(p.n(), p.n());
  const Matrix G = f.F.transpose() * f.T.llt().solve(f.F);
  return SymMatrix(G).matrix();
}

/// Rank of the condition matrix, measured on S^T R^{-1/2} H relative to the
/// scale of R^{-1/2} H.
inline RankInfo oci_feasible_info(const FusionProblem& p, const Tolerances& tol = {}) {
  const auto f = detail::condition_factors(p, tol);
  if (f.F.rows() == 0) return RankInfo{0, std::numeric_limits<double>::infinity()};
  return rank_info_against(f.F, f.h_scale, tol);
}

inline bool oci_feasible(const FusionProblem& p, const Tolerances& tol = {}) {
  if (rank_tol(p.H(), tol) != p.n()) return false;
  return oci_feasible_info(p, tol).rank == p.n();
}

inline FeasibilityReport analyze(const FusionProblem& p, const Tolerances& tol = {}) {
  FeasibilityReport r;
  const RankInfo pw = p_bounded_info(p.info(), tol);
  r.p_bounded = pw.rank == p.m();
  r.rank_margins.p_bounded = pw.margin;
  const auto [cpc, cpc_margin] = cpc_bounded_info(p.info(), p.C(), tol);
  r.cpc_bounded = cpc;
  r.rank_margins.cpc_bounded = cpc_margin;
  const RankInfo h = rank_info(p.H(), tol);
  r.h_full_rank = h.rank == p.n();
  r.rank_margins.h_rank = h.margin;
  r.sufficient_feasible = r.h_full_rank && r.cpc_bounded;
  if (!r.h_full_rank) {
    r.oci_feasible = false;
    r.reason = FeasibilityReason::HRankDeficient;
    r.rank_margins.oci_feasible = h.margin;
  } else {
    const RankInfo c1 = oci_feasible_info(p, tol);
    r.rank_margins.oci_feasible = c1.margin;
    r.oci_feasible = c1.rank == p.n();
    r.reason = r.oci_feasible ? FeasibilityReason::Feasible : FeasibilityReason::ConditionFails;
  }
  r.borderline = r.rank_margins.p_bounded < 10 || r.rank_margins.cpc_bounded < 10 ||
                 r.rank_margins.h_rank < 10 || r.rank_margins.oci_feasible < 10;
  return r;
}

}  // namespace oci
