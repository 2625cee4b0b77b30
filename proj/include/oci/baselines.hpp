#pragma once

// Covariance intersection and split covariance intersection written as OCI
// instances, so they run through the same solver.

#include "oci/problem.hpp"

#include <optional>
#include <sstream>

namespace oci {

/// Two estimates z_i = H_i x + e_i with autocorrelation bounds X_i on the
/// correlated parts and, for SCI, known independent parts Xind_i.
struct TwoEstimateCI {
  Matrix X1, X2;
  Matrix H1, H2;
  std::optional<Matrix> Xind1, Xind2;

  void validate() const {
    if (X1.rows() != H1.rows() || X2.rows() != H2.rows())
      throw Error("two-estimate CI: X_i must match rows of H_i");
    if (H1.cols() != H2.cols()) throw Error("two-estimate CI: H_1 and H_2 must share columns");
  }
};

namespace detail {

inline std::vector<ComponentBound> two_block_bounds(const TwoEstimateCI& s) {
  const Eigen::Index o1 = s.X1.rows(), o2 = s.X2.rows(), o = o1 + o2;
  Matrix W1 = Matrix::Zero(o1, o);
  W1.leftCols(o1).setIdentity();
  Matrix W2 = Matrix::Zero(o2, o);
  W2.rightCols(o2).setIdentity();
  return {ComponentBound(W1, s.X1), ComponentBound(W2, s.X2)};
}

inline Matrix stacked_H(const TwoEstimateCI& s) {
  Matrix H(s.H1.rows() + s.H2.rows(), s.H1.cols());
  H << s.H1, s.H2;
  return H;
}

}  // namespace detail

/// Default R = 0 substitute: 1e-8 * trace(X1 + X2) / dim.
inline double default_epsilon_r(const TwoEstimateCI& s) {
  return 1e-8 * (s.X1.trace() + s.X2.trace()) / static_cast<double>(s.X1.rows() + s.X2.rows());
}

/// Basic CI: R = epsilon_r I (standing in for R = 0), C = I, W_1 = [I 0], W_2 = [0 I].
inline FusionProblem cast_basic_ci(const TwoEstimateCI& s, double epsilon_r) {
  s.validate();
  if (!(epsilon_r > 0)) throw Error("cast_basic_ci: epsilon_r must be positive");
  const Eigen::Index o = s.X1.rows() + s.X2.rows();
  std::ostringstream note;
  note << "approximation: R = 0 replaced by epsilon_r * I with epsilon_r = " << epsilon_r;
  return FusionProblem(detail::stacked_H(s), epsilon_r * Matrix::Identity(o, o),
                       Matrix::Identity(o, o), InfoStructure(o, detail::two_block_bounds(s)))
      .with_note(note.str());
}

inline FusionProblem cast_basic_ci(const TwoEstimateCI& s) {
  return cast_basic_ci(s, default_epsilon_r(s));
}

/// Split CI: R = blkdiag(Xind1, Xind2), C = I, W_1 = [I 0], W_2 = [0 I].
inline FusionProblem cast_sci(const TwoEstimateCI& s) {
  s.validate();
  if (!s.Xind1 || !s.Xind2) throw Error("cast_sci: independent components are required");
  const std::vector<Matrix> blocks{*s.Xind1, *s.Xind2};
  const Eigen::Index o = s.X1.rows() + s.X2.rows();
  return FusionProblem(detail::stacked_H(s), block_diagonal(blocks), Matrix::Identity(o, o),
                       InfoStructure(o, detail::two_block_bounds(s)));
}

/// Classical two-estimate CI bound for a given weight: (w X1^-1 + (1 - w) X2^-1)^-1,
/// for estimates of the full state (H_1 = H_2 = I).
inline Matrix classical_ci_bound(const Matrix& X1, const Matrix& X2, double w) {
  const Matrix info = w * X1.inverse() + (1.0 - w) * X2.inverse();
  return info.inverse();
}

/// Drop all cross-correlation knowledge: every bound whose selector rows are
/// unit vectors is replaced by one scalar bound per selected coordinate.
inline InfoStructure autocorrelation_only(const InfoStructure& info) {
  std::vector<ComponentBound> out;
  for (const auto& b : info.bounds()) {
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      Eigen::Index col = -1;
      for (Eigen::Index c = 0; c < b.cols(); ++c) {
        const double v = b.W()(r, c);
        if (v == 0.0) continue;
        if (v != 1.0 || col >= 0) throw Error("autocorrelation_only: W rows must be unit selectors");
        col = c;
      }
      Matrix w = Matrix::Zero(1, info.m());
      w(0, col) = 1.0;
      out.emplace_back(w, Matrix::Constant(1, 1, b.X().matrix()(r, r)));
    }
  }
  return InfoStructure(info.m(), std::move(out));
}

/// Same fusion problem with only autocorrelation bounds (the SCI information).
inline FusionProblem sci_restriction(const FusionProblem& p) {
  return FusionProblem(p.H(), p.R().matrix(), p.C(), autocorrelation_only(p.info()));
}

}  // namespace oci
