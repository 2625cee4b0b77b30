#pragma once

// Tolerance-aware dense symmetric linear algebra used throughout the library.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace oci {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Error raised on invalid input (dimension mismatch, non-PSD argument, ...).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical cutoffs. All strictly positive and tol_check >= tol_solve.
struct Tolerances {
  double tol_psd = 1e-9;    // absolute eigenvalue floor for PSD acceptance
  double tol_pd = 1e-12;    // eigenvalue floor for positive definiteness
  double tol_rank = 1e-9;   // relative singular-value cutoff
  double tol_solve = 1e-9;  // interior-point stopping gap (relative)
  double tol_check = 1e-6;  // post-hoc verification slack

  void validate() const {
    if (!(tol_psd > 0 && tol_pd > 0 && tol_rank > 0 && tol_solve > 0 && tol_check > 0))
      throw Error("tolerances must be strictly positive");
    if (tol_check < tol_solve) throw Error("tol_check must be >= tol_solve");
  }
};

/// Dense real symmetric matrix. Symmetry is exact: input is replaced by (A + A^T)/2.
class SymMatrix {
 public:
  SymMatrix() = default;

  explicit SymMatrix(const Matrix& a) {
    if (a.rows() != a.cols()) throw Error("SymMatrix: matrix is not square");
    if (a.rows() < 1) throw Error("SymMatrix: dimension must be >= 1");
    if (!a.allFinite()) throw Error("SymMatrix: non-finite entries");
    data_ = 0.5 * (a + a.transpose());
  }

  static SymMatrix identity(Eigen::Index n) { return SymMatrix(Matrix::Identity(n, n)); }
  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Matrix::Zero(n, n)); }
  static SymMatrix diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

  Eigen::Index dim() const { return data_.rows(); }
  const Matrix& matrix() const { return data_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return data_(i, j); }

  Vector eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(data_, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }
  double min_eigenvalue() const { return eigenvalues().minCoeff(); }
  double max_eigenvalue() const { return eigenvalues().maxCoeff(); }
  double trace() const { return data_.trace(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.data_ + b.data_);
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.data_ - b.data_);
  }
  friend SymMatrix operator*(double s, const SymMatrix& a) { return SymMatrix(s * a.data_); }

 private:
  Matrix data_;
};

enum class Definiteness { PositiveDefinite, PositiveSemidefinite };

/// Symmetric matrix verified to be PSD (or PD) at construction.
class PsdMatrix {
 public:
  PsdMatrix() = default;

  PsdMatrix(const SymMatrix& s, Definiteness kind, const Tolerances& tol = {})
      : base_(s), kind_(kind) {
    const double lmin = s.min_eigenvalue();
    if (kind == Definiteness::PositiveDefinite) {
      if (!(lmin >= tol.tol_pd)) throw Error("matrix is not positive definite");
    } else if (!(lmin >= -tol.tol_psd)) {
      throw Error("matrix is not positive semidefinite");
    }
  }
  PsdMatrix(const Matrix& a, Definiteness kind, const Tolerances& tol = {})
      : PsdMatrix(SymMatrix(a), kind, tol) {}

  const SymMatrix& sym() const { return base_; }
  const Matrix& matrix() const { return base_.matrix(); }
  Eigen::Index dim() const { return base_.dim(); }
  Definiteness definiteness() const { return kind_; }

 private:
  SymMatrix base_;
  Definiteness kind_ = Definiteness::PositiveSemidefinite;
};

/// Orthonormal range/null bases with the positive spectrum: A = V diag(D) V^T.
struct SpectralFactorization {
  Matrix range_basis;  // V
  Matrix null_basis;   // V_perp
  Vector diag_values;  // D, all above the rank cutoff

  Eigen::Index rank() const { return range_basis.cols(); }
};

/// Numerical rank plus distance from the decision boundary.
///
/// margin = min(smallest retained singular value / cutoff, cutoff / largest
/// discarded one); values near 1 mean the verdict is numerically fragile.
struct RankInfo {
  Eigen::Index rank = 0;
  double margin = std::numeric_limits<double>::infinity();

  bool borderline(double factor = 10.0) const { return margin < factor; }
};

namespace detail {

inline RankInfo rank_from_values(const Vector& values_desc, double rel_tol, double reference = -1) {
  RankInfo info;
  if (values_desc.size() == 0) return info;
  const double vmax = reference > 0 ? reference : values_desc(0);
  if (!(vmax > 0)) return info;
  const double cutoff = rel_tol * vmax;
  Eigen::Index r = 0;
  while (r < values_desc.size() && values_desc(r) > cutoff) ++r;
  info.rank = r;
  double margin = std::numeric_limits<double>::infinity();
  if (r > 0) margin = std::min(margin, values_desc(r - 1) / cutoff);
  if (r < values_desc.size()) {
    const double next = std::max(values_desc(r), 0.0);
    margin = std::min(margin, next > 0 ? cutoff / next : std::numeric_limits<double>::infinity());
  }
  info.margin = margin;
  return info;
}

}  // namespace detail

inline RankInfo rank_info(const Matrix& a, const Tolerances& tol = {}) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(a);
  return detail::rank_from_values(svd.singularValues(), tol.tol_rank);
}

/// Rank with the cutoff taken relative to an external scale instead of sigma_max(a).
inline RankInfo rank_info_against(const Matrix& a, double reference, const Tolerances& tol = {}) {
  if (a.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(a);
  return detail::rank_from_values(svd.singularValues(), tol.tol_rank, reference);
}

/// Numerical rank: count of singular values above tol_rank * sigma_max.
inline Eigen::Index rank_tol(const Matrix& a, const Tolerances& tol = {}) {
  return rank_info(a, tol).rank;
}

/// Rank of a symmetric PSD matrix from its eigenvalues.
inline RankInfo psd_rank_info(const SymMatrix& a, const Tolerances& tol = {}) {
  Vector ev = a.eigenvalues().cwiseAbs();
  std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
  return detail::rank_from_values(ev, tol.tol_rank);
}

/// Moore-Penrose pseudo-inverse via symmetric eigendecomposition.
/// Eigenvalues with |lambda| <= tol_rank * max|lambda| are treated as zero.
inline SymMatrix pinv(const SymMatrix& a, const Tolerances& tol = {}) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  const Vector& ev = es.eigenvalues();
  const double vmax = ev.cwiseAbs().maxCoeff();
  Vector inv = Vector::Zero(ev.size());
  if (vmax > 0) {
    const double cutoff = tol.tol_rank * vmax;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
      if (std::abs(ev(i)) > cutoff) inv(i) = 1.0 / ev(i);
  }
  const Matrix& v = es.eigenvectors();
  return SymMatrix(v * inv.asDiagonal() * v.transpose());
}

/// Split a PSD matrix into range and null-space bases.
inline SpectralFactorization spectral_split(const SymMatrix& a, const Tolerances& tol = {}) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix());
  const Vector& ev = es.eigenvalues();  // ascending
  if (ev.minCoeff() < -tol.tol_psd) throw Error("spectral_split: matrix is not PSD");
  const double vmax = ev.cwiseAbs().maxCoeff();
  const double cutoff = tol.tol_rank * vmax;
  const Eigen::Index n = a.dim();
  Eigen::Index first = 0;
  if (vmax > 0) {
    while (first < n && ev(first) <= cutoff) ++first;
  } else {
    first = n;
  }
  SpectralFactorization f;
  const Eigen::Index r = n - first;
  // Largest eigenvalues first in the range basis.
  f.range_basis = es.eigenvectors().rightCols(r).rowwise().reverse();
  f.diag_values = ev.tail(r).reverse();
  f.null_basis = es.eigenvectors().leftCols(first);
  return f;
}

inline SpectralFactorization spectral_split(const PsdMatrix& a, const Tolerances& tol = {}) {
  return spectral_split(a.sym(), tol);
}

namespace detail {

/// Full left singular basis split at the numerical rank.
inline std::pair<Matrix, Matrix> column_space_split(const Matrix& a, const Tolerances& tol) {
  if (a.cols() == 0 || a.rows() == 0 || a.cwiseAbs().maxCoeff() == 0.0)
    return {Matrix(a.rows(), 0), Matrix::Identity(a.rows(), a.rows())};
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const Eigen::Index r = rank_from_values(svd.singularValues(), tol.tol_rank).rank;
  const Matrix& u = svd.matrixU();
  return {u.leftCols(r), u.rightCols(a.rows() - r)};
}

}  // namespace detail

/// Orthonormal basis of the column space of an arbitrary matrix.
inline Matrix range_basis(const Matrix& a, const Tolerances& tol = {}) {
  return detail::column_space_split(a, tol).first;
}

/// Orthonormal basis of the orthogonal complement of the column space.
inline Matrix complement_basis(const Matrix& a, const Tolerances& tol = {}) {
  return detail::column_space_split(a, tol).second;
}

/// True iff lambda_min(A - B) >= -tol_check.
inline bool check_psd_order(const SymMatrix& a, const SymMatrix& b, const Tolerances& tol = {}) {
  if (a.dim() != b.dim()) throw Error("check_psd_order: dimension mismatch");
  return (a - b).min_eigenvalue() >= -tol.tol_check;
}

inline bool is_psd(const SymMatrix& a, double slack) { return a.min_eigenvalue() >= -slack; }

/// Inverse of a positive definite matrix; throws if not invertible.
inline SymMatrix inverse_pd(const SymMatrix& a, const char* what = "matrix") {
  Eigen::LLT<Matrix> llt(a.matrix());
  if (llt.info() != Eigen::Success)
    throw Error(std::string(what) + " is not positive definite");
  return SymMatrix(llt.solve(Matrix::Identity(a.dim(), a.dim())));
}

/// Block-diagonal assembly of square blocks.
template <typename Range>
Matrix block_diagonal(const Range& blocks) {
  Eigen::Index total = 0;
  for (const auto& b : blocks) total += b.rows();
  Matrix out = Matrix::Zero(total, total);
  Eigen::Index off = 0;
  for (const auto& b : blocks) {
    out.block(off, off, b.rows(), b.cols()) = b;
    off += b.rows();
  }
  return out;
}

}  // namespace oci
