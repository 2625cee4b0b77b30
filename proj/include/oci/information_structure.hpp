#pragma once

// Partial-knowledge structure: bounds W_b P W_b^T <= X_b on an unknown
// positive definite P, their inverse forms, and Kahan combinations.

#include "oci/sym_core.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace oci {

/// One bound W P W^T <= X.
class ComponentBound {
 public:
  ComponentBound(Matrix W, const Matrix& X, const Tolerances& tol = {})
      : W_(std::move(W)), X_(X, Definiteness::PositiveDefinite, tol) {
    if (W_.rows() < 1 || W_.cols() < 1) throw Error("bound: W must be non-empty");
    if (!W_.allFinite()) throw Error("bound: W has non-finite entries");
    if (X_.dim() != W_.rows()) throw Error("bound: X dimension must equal rows of W");
    for (Eigen::Index i = 0; i < W_.rows(); ++i)
      if (W_.row(i).cwiseAbs().maxCoeff() == 0.0)
        throw Error("bound: W has an all-zero row " + std::to_string(i));
  }

  const Matrix& W() const { return W_; }
  const PsdMatrix& X() const { return X_; }
  Eigen::Index rows() const { return W_.rows(); }
  Eigen::Index cols() const { return W_.cols(); }

 private:
  Matrix W_;
  PsdMatrix X_;
};

/// Y_b = W^T X^{-1} W, possibly singular.
struct InverseBound {
  PsdMatrix Y;
  Eigen::Index dim() const { return Y.dim(); }
  const Matrix& matrix() const { return Y.matrix(); }
};

class SimplexWeights {
 public:
  SimplexWeights() = default;
  explicit SimplexWeights(Vector omega, const Tolerances& tol = {}) : omega_(std::move(omega)) {
    if (omega_.size() < 1) throw Error("simplex weights: empty");
    if (!omega_.allFinite() || omega_.minCoeff() < 0.0)
      throw Error("simplex weights: entries must be nonnegative");
    if (std::abs(omega_.sum() - 1.0) > tol.tol_check)
      throw Error("simplex weights: entries must sum to one");
  }

  static SimplexWeights uniform(Eigen::Index M) {
    return SimplexWeights(Vector::Constant(M, 1.0 / static_cast<double>(M)));
  }
  static SimplexWeights vertex(Eigen::Index M, Eigen::Index b) {
    Vector w = Vector::Zero(M);
    w(b) = 1.0;
    return SimplexWeights(w);
  }

  /// Clip negatives, zero entries below `floor`, renormalize.
  static SimplexWeights cleaned(const Vector& raw, double floor = 1e-12) {
    Vector w = raw.cwiseMax(0.0);
    for (Eigen::Index i = 0; i < w.size(); ++i)
      if (w(i) < floor) w(i) = 0.0;
    const double s = w.sum();
    if (!(s > 0)) throw Error("simplex weights: all entries vanished");
    return SimplexWeights(w / s);
  }

  const Vector& omega() const { return omega_; }
  Eigen::Index size() const { return omega_.size(); }
  double operator[](Eigen::Index i) const { return omega_(i); }

 private:
  Vector omega_;
};

class InfoStructure {
 public:
  InfoStructure(Eigen::Index m, std::vector<ComponentBound> bounds)
      : m_(m), bounds_(std::move(bounds)) {
    if (m_ < 1) throw Error("info structure: m must be >= 1");
    if (bounds_.empty()) throw Error("info structure: at least one bound required");
    for (std::size_t b = 0; b < bounds_.size(); ++b)
      if (bounds_[b].cols() != m_)
        throw Error("info structure: bound " + std::to_string(b) + " has wrong column count");
  }

  Eigen::Index m() const { return m_; }
  Eigen::Index size() const { return static_cast<Eigen::Index>(bounds_.size()); }
  const std::vector<ComponentBound>& bounds() const { return bounds_; }
  const ComponentBound& operator[](std::size_t b) const { return bounds_[b]; }

 private:
  Eigen::Index m_;
  std::vector<ComponentBound> bounds_;
};

inline InverseBound to_inverse_bound(const ComponentBound& b, const Tolerances& tol = {}) {
  Eigen::LLT<Matrix> llt(b.X().matrix());
  if (llt.info() != Eigen::Success) throw Error("bound: X is not invertible");
  const Matrix Y = b.W().transpose() * llt.solve(b.W());
  return {PsdMatrix(Y, Definiteness::PositiveSemidefinite, tol)};
}

inline std::vector<InverseBound> inverse_bounds(const InfoStructure& info,
                                                const Tolerances& tol = {}) {
  std::vector<InverseBound> out;
  out.reserve(info.bounds().size());
  for (const auto& b : info.bounds()) out.push_back(to_inverse_bound(b, tol));
  return out;
}

inline Matrix stacked_W(const InfoStructure& info) {
  Eigen::Index rows = 0;
  for (const auto& b : info.bounds()) rows += b.rows();
  Matrix W(rows, info.m());
  Eigen::Index off = 0;
  for (const auto& b : info.bounds()) {
    W.middleRows(off, b.rows()) = b.W();
    off += b.rows();
  }
  return W;
}

/// W^T blkdiag(X_1..X_M)^{-1} W / M.
inline InverseBound aggregate_inverse_bound(const InfoStructure& info, const Tolerances& tol = {}) {
  std::vector<Matrix> xs;
  for (const auto& b : info.bounds()) xs.push_back(b.X().matrix());
  const Matrix X = block_diagonal(xs);
  const Matrix W = stacked_W(info);
  const Matrix Y = W.transpose() * X.llt().solve(W) / static_cast<double>(info.size());
  return {PsdMatrix(Y, Definiteness::PositiveSemidefinite, tol)};
}

inline Matrix kahan_combine(const std::vector<InverseBound>& ys, const SimplexWeights& w) {
  if (static_cast<Eigen::Index>(ys.size()) != w.size())
    throw Error("kahan_combine: weight length mismatch");
  Matrix Y = Matrix::Zero(ys.front().dim(), ys.front().dim());
  for (std::size_t b = 0; b < ys.size(); ++b)
    if (w[static_cast<Eigen::Index>(b)] != 0.0) Y += w[static_cast<Eigen::Index>(b)] * ys[b].matrix();
  return Y;
}

inline InverseBound kahan_combine(const InfoStructure& info, const SimplexWeights& w,
                                  const Tolerances& tol = {}) {
  if (info.size() != w.size()) throw Error("kahan_combine: weight length mismatch");
  return {PsdMatrix(kahan_combine(inverse_bounds(info, tol), w), Definiteness::PositiveSemidefinite,
                    tol)};
}

/// Largest eigenvalue of W_b P W_b^T - X_b over all bounds.
inline double max_bound_violation(const InfoStructure& info, const Matrix& P) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& b : info.bounds()) {
    const SymMatrix d(b.W() * P * b.W().transpose() - b.X().matrix());
    worst = std::max(worst, d.max_eigenvalue());
  }
  return worst;
}

inline bool contains(const InfoStructure& info, const PsdMatrix& P, const Tolerances& tol = {}) {
  if (P.dim() != info.m()) throw Error("contains: dimension mismatch");
  return max_bound_violation(info, P.matrix()) <= tol.tol_check;
}

namespace detail {

inline Matrix inv_sqrt_pd(const Matrix& X) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(X);
  return es.operatorInverseSqrt();
}

inline Matrix random_gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Matrix A(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) A(i, j) = nd(rng);
  return A;
}

/// Y^-1, or (Y + ridge I)^-1 with a small relative ridge when Y is singular.
inline Matrix ridged_inverse(const Matrix& Y, const Tolerances& tol) {
  const SymMatrix Ys(Y);
  if (Ys.min_eigenvalue() > tol.tol_rank * std::max(Ys.max_eigenvalue(), 1e-300))
    return inverse_pd(Ys).matrix();
  const double ridge = 1e-6 * std::max(Y.trace(), 1e-300) / static_cast<double>(Y.rows());
  return inverse_pd(SymMatrix(Matrix(Ys.matrix() + ridge * Matrix::Identity(Y.rows(), Y.cols())))).matrix();
}

}  // namespace detail

/// Scale factor alpha such that alpha * G sits exactly on the boundary of the
/// admissible set. Infinite when G lies in the common kernel of all W_b.
inline double boundary_scale(const InfoStructure& info, const Matrix& G) {
  double lmax = 0.0;
  for (const auto& b : info.bounds()) {
    const Matrix S = detail::inv_sqrt_pd(b.X().matrix());
    const SymMatrix T(S * b.W() * G * b.W().transpose() * S);
    lmax = std::max(lmax, T.max_eigenvalue());
  }
  return lmax > 0 ? 1.0 / lmax : std::numeric_limits<double>::infinity();
}

/// Deterministic sampler of admissible P. Roughly half of the samples are
/// scaled onto the boundary (some bound active); the rest are interior.
/// Generators cycle through random PD, low-rank plus ridge, Kahan inverses
/// Y(omega)^{-1} and the aggregate inverse, and add kernel-of-W directions.

inline std::vector<PsdMatrix> sample_admissible(const InfoStructure& info, std::size_t count,
                                                std::uint64_t seed, const Tolerances& tol = {}) {
  std::vector<PsdMatrix> out;
  if (count == 0) return out;
  out.reserve(count);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Eigen::Index m = info.m();
  const auto ys = inverse_bounds(info, tol);
  const Matrix W = stacked_W(info);
  const Matrix kernel = complement_basis(W.transpose(), tol);  // common null space of all W_b
  double scale = 0.0;
  for (const auto& b : info.bounds()) scale = std::max(scale, b.X().sym().max_eigenvalue());

  for (std::size_t k = 0; k < count; ++k) {
    Matrix G;
    switch (k % 5) {
      case 0: {
        const Matrix A = detail::random_gaussian(m, m, rng);
        G = A * A.transpose();
        break;
      }
      case 1: {
        const Eigen::Index r = 1 + static_cast<Eigen::Index>(unif(rng) * static_cast<double>(m));
        const Matrix A = detail::random_gaussian(m, std::min(r, m), rng);
        G = A * A.transpose() + 1e-6 * A.squaredNorm() * Matrix::Identity(m, m);
        break;
      }
      case 2: {
        Vector w(info.size());
        for (Eigen::Index b = 0; b < w.size(); ++b) w(b) = -std::log(1.0 - unif(rng));
        G = detail::ridged_inverse(kahan_combine(ys, SimplexWeights(w / w.sum())), tol);
        break;
      }
      case 3: {
        const Matrix Y = aggregate_inverse_bound(info, tol).matrix() * static_cast<double>(info.size());
        const Matrix Yb = ys[k / 5 % ys.size()].matrix();
        G = detail::ridged_inverse(unif(rng) < 0.5 ? Y : Yb, tol);
        break;
      }
      default: {
        const Matrix A = detail::random_gaussian(m, 1, rng);
        G = A * A.transpose() + 1e-3 * A.squaredNorm() * Matrix::Identity(m, m);
        break;
      }
    }
    G = 0.5 * (G + G.transpose());
    double alpha = boundary_scale(info, G);
    if (!std::isfinite(alpha)) alpha = scale / std::max(G.trace(), 1e-300);
    const bool boundary = (k % 2 == 0);
    const double t = boundary ? 1.0 : 0.05 + 0.95 * unif(rng);
    Matrix P = alpha * t * G;
    if (kernel.cols() > 0 && unif(rng) < 0.5) {
      const Matrix A = detail::random_gaussian(kernel.cols(), kernel.cols(), rng);
      P += (1.0 + 100.0 * unif(rng)) * scale * kernel * (A * A.transpose()) * kernel.transpose();
    }
    SymMatrix Ps(P);
    const double lmin = Ps.min_eigenvalue();
    if (lmin < tol.tol_pd) {
      // Lift the spectrum floor, then re-project onto the admissible set.
      Matrix Pf = Ps.matrix() + (tol.tol_pd - lmin) * Matrix::Identity(m, m);
      const double a = boundary_scale(info, Pf);
      if (std::isfinite(a) && a < 1.0) Pf *= a;
      Ps = SymMatrix(Pf);
    }
    out.emplace_back(Ps, Definiteness::PositiveSemidefinite, tol);
  }
  return out;
}

/// Boundary of {x : x^T Y x <= 1} for m in {2, 3}.
struct EllipsoidPoints {
  std::vector<Vector> points;
  bool degenerate = false;
  double clip_radius = 0.0;  // 10x the largest finite semi-axis when degenerate
};

inline EllipsoidPoints ellipsoid_boundary_points(const Matrix& Ysym, int resolution,
                                                 const Tolerances& tol = {}) {
  const Eigen::Index m = Ysym.rows();
  if (m != 2 && m != 3) throw Error("ellipsoid_boundary_points: only m = 2 or 3 supported");
  if (resolution < 1) throw Error("ellipsoid_boundary_points: resolution must be >= 1");
  const SymMatrix Y(Ysym);
  const auto f = spectral_split(Y, tol);
  const Eigen::Index r = f.rank();
  EllipsoidPoints out;
  out.degenerate = r < m;
  Vector semi = Vector::Zero(r);
  for (Eigen::Index i = 0; i < r; ++i) semi(i) = 1.0 / std::sqrt(f.diag_values(i));
  const double largest = r > 0 ? semi.maxCoeff() : 1.0;
  if (out.degenerate) out.clip_radius = 10.0 * largest;
  const double rc = out.clip_radius;
  const double two_pi = 2.0 * std::numbers::pi;
  const auto param = [&](int k) { return two_pi * k / resolution; };
  const auto line = [&](int k) {
    return resolution == 1 ? 0.0 : -rc + 2.0 * rc * k / (resolution - 1);
  };
  const Matrix& V = f.range_basis;
  const Matrix& N = f.null_basis;

  if (r == m) {
    if (m == 2) {
      for (int k = 0; k < resolution; ++k)
        out.points.push_back(V.col(0) * semi(0) * std::cos(param(k)) +
                             V.col(1) * semi(1) * std::sin(param(k)));
    } else {
      for (int a = 0; a < resolution; ++a) {
        const double th = std::numbers::pi * (a + 0.5) / resolution;
        for (int b = 0; b < resolution; ++b)
          out.points.push_back(V.col(0) * semi(0) * std::sin(th) * std::cos(param(b)) +
                               V.col(1) * semi(1) * std::sin(th) * std::sin(param(b)) +
                               V.col(2) * semi(2) * std::cos(th));
      }
    }
    return out;
  }
  if (r == 0) {
    // Whole space: emit the clip circle/sphere cross-section in the first plane.
    for (int k = 0; k < resolution; ++k) {
      Vector x = Vector::Zero(m);
      x(0) = rc * std::cos(param(k));
      x(1) = rc * std::sin(param(k));
      out.points.push_back(x);
    }
    return out;
  }
  if (r == 1) {
    // Two parallel lines (m = 2) or planes (m = 3) at distance semi(0).
    for (const double sgn : {1.0, -1.0}) {
      const Vector c = sgn * semi(0) * V.col(0);
      if (m == 2) {
        for (int k = 0; k < resolution; ++k) out.points.push_back(c + line(k) * N.col(0));
      } else {
        for (int a = 0; a < resolution; ++a)
          for (int b = 0; b < resolution; ++b)
            out.points.push_back(c + line(a) * N.col(0) + line(b) * N.col(1));
      }
    }
    return out;
  }
  // m = 3, r = 2: elliptic cylinder along the null direction.
  for (int a = 0; a < resolution; ++a)
    for (int b = 0; b < resolution; ++b)
      out.points.push_back(V.col(0) * semi(0) * std::cos(param(b)) +
                           V.col(1) * semi(1) * std::sin(param(b)) + line(a) * N.col(0));
  return out;
}

}  // namespace oci
