#pragma once

// Brute-force checks against sampled admissible matrices, certificate checks,
// and randomized verification of the matrix identities the solver relies on.

#include "oci/oci_solver.hpp"

#include <array>
#include <cstdint>
#include <random>

namespace oci {

struct ConsistencyVerdict {
  double max_violation = -std::numeric_limits<double>::infinity();
  std::size_t worst_sample_index = 0;
  std::size_t samples_checked = 0;
  bool pass = false;
};

/// Largest eigenvalue of K (R + C P C^T) K^T - B over sampled admissible P.
inline ConsistencyVerdict check_consistency(const FusionProblem& p, const Matrix& K, const Matrix& B,
                                            std::size_t samples, std::uint64_t seed,
                                            const Tolerances& tol = {}) {
  if (K.rows() != p.n() || K.cols() != p.o() || B.rows() != p.n() || B.cols() != p.n())
    throw Error("check_consistency: shape mismatch");
  if ((K * p.H() - Matrix::Identity(p.n(), p.n())).norm() > tol.tol_check)
    throw Error("check_consistency: gain is not unbiased");
  ConsistencyVerdict v;
  const Matrix KR = K * p.R().matrix() * K.transpose();
  const Matrix KC = K * p.C();
  const auto ps = sample_admissible(p.info(), samples, seed, tol);
  for (std::size_t s = 0; s < ps.size(); ++s) {
    const SymMatrix d(KR + KC * ps[s].matrix() * KC.transpose() - B);
    const double lmax = d.max_eigenvalue();
    if (lmax > v.max_violation) {
      v.max_violation = lmax;
      v.worst_sample_index = s;
    }
  }
  v.samples_checked = ps.size();
  v.pass = v.max_violation <= tol.tol_check;
  return v;
}

/// Smallest eigenvalues of the certificate blocks at (U, B, omega) and, with a
/// projection selector D, of [M D; D^T Y(omega)].
struct CertificateReport {
  double gain_block = 0;
  double kahan_block = 0;
  std::optional<double> projection_block;
  bool weights_valid = false;
  bool pass = false;
};

inline CertificateReport certificate_report(const FusionProblem& p, const FusionSolution& s,
                                            const std::optional<Matrix>& D = std::nullopt,
                                            const Tolerances& tol = {}) {
  const ProblemTerms t(p, tol);
  const Eigen::Index n = p.n(), m = p.m();
  CertificateReport r;
  Matrix L1(2 * n, 2 * n);
  L1 << s.B, Matrix::Identity(n, n), Matrix::Identity(n, n), t.G - s.U;
  r.gain_block = SymMatrix(L1).min_eigenvalue();
  const Vector& w = s.omega.omega();
  r.weights_valid = w.size() == p.info().size() && w.minCoeff() >= 0.0 &&
                    std::abs(w.sum() - 1.0) <= tol.tol_check;
  Matrix Y = Matrix::Zero(m, m);
  for (Eigen::Index b = 0; b < w.size() && b < p.info().size(); ++b)
    Y += w(b) * t.Ys[static_cast<std::size_t>(b)].matrix();
  Matrix L2(n + m, n + m);
  L2 << s.U, t.E, t.E.transpose(), Y + t.Crc;
  r.kahan_block = SymMatrix(L2).min_eigenvalue();
  bool ok = r.gain_block >= -tol.tol_check && r.kahan_block >= -tol.tol_check;
  if (D && s.M) {
    const Eigen::Index d = D->rows();
    Matrix L3(d + m, d + m);
    L3 << *s.M, *D, D->transpose(), Y;
    r.projection_block = SymMatrix(L3).min_eigenvalue();
    ok = ok && *r.projection_block >= -tol.tol_check;
  }
  r.pass = ok;
  return r;
}

/// True iff every certificate block has smallest eigenvalue >= -tol_check.
/// Weight validity is reported separately by certificate_report.
inline bool check_lmi_certificates(const FusionProblem& p, const FusionSolution& s,
                                   const std::optional<Matrix>& D = std::nullopt,
                                   const Tolerances& tol = {}) {
  return certificate_report(p, s, D, tol).pass;
}

/// Frobenius residual between the two sides of
///   R^-1 - R^-1 C (Y + C^T R^-1 C)^+ C^T R^-1 = S (S^T (R + C Y^+ C^T) S)^-1 S^T,
/// where S is an orthonormal basis of the complement of col(C V_perp), V_perp spanning ker Y.
inline double check_prop2_identity(const Matrix& R, const Matrix& C, const Matrix& Y,
                                   const Tolerances& tol = {}) {
  const SymMatrix Rs(R);
  const SymMatrix Ys(Y);
  const Matrix Ri = inverse_pd(Rs, "R").matrix();
  const Matrix Crc = C.transpose() * Ri * C;
  const Matrix lhs = Ri - Ri * C * pinv(SymMatrix(Ys.matrix() + Crc), tol).matrix() * C.transpose() * Ri;
  const Matrix Vperp = spectral_split(Ys, tol).null_basis;
  const Matrix S = complement_basis(C * Vperp, tol);
  Matrix rhs = Matrix::Zero(R.rows(), R.rows());
  if (S.cols() > 0) {
    const Matrix T = S.transpose() * (Rs.matrix() + C * pinv(Ys, tol).matrix() * C.transpose()) * S;
    rhs = S * T.llt().solve(S.transpose());
  }
  return (lhs - rhs).norm();
}

/// Trials and failures per Schur-complement statement (i)..(v).
struct SchurReport {
  std::array<int, 5> trials{};
  std::array<int, 5> failures{};
  bool pass() const {
    for (int f : failures)
      if (f != 0) return false;
    return true;
  }
};

namespace detail {

inline Matrix random_pd(Eigen::Index k, std::mt19937_64& rng, double ridge = 0.1) {
  const Matrix A = random_gaussian(k, k, rng);
  return A * A.transpose() + ridge * Matrix::Identity(k, k);
}

inline Matrix random_psd_rank(Eigen::Index k, Eigen::Index r, std::mt19937_64& rng) {
  const Matrix A = random_gaussian(k, r, rng);
  return A * A.transpose();
}

inline Matrix block2(const Matrix& A, const Matrix& B, const Matrix& C) {
  Matrix X(A.rows() + C.rows(), A.cols() + C.cols());
  X << A, B, B.transpose(), C;
  return X;
}

}  // namespace detail

/// Randomized check of the block Schur-complement statements. Matrices are
/// built with clear margins (>= 0.05) so each predicate has a definite answer.
inline SchurReport check_prop1_schur(int trials, std::uint64_t seed, const Tolerances& tol = {}) {
  using detail::block2;
  using detail::random_gaussian;
  using detail::random_pd;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double eps = tol.tol_check;
  const auto psd = [&](const Matrix& a) { return SymMatrix(a).min_eigenvalue() >= -eps; };
  const auto pd = [&](const Matrix& a) { return SymMatrix(a).min_eigenvalue() > eps; };
  // Symmetric perturbation that is either clearly PSD or clearly indefinite.
  const auto shift = [&](Eigen::Index k, bool make_psd) {
    Matrix S = random_pd(k, rng, 0.05);
    if (!make_psd) {
      const Vector v = random_gaussian(k, 1, rng);
      S -= (S.norm() + 1.0) * (v * v.transpose()) / v.squaredNorm();
    }
    return S;
  };
  SchurReport rep;
  for (int t = 0; t < trials; ++t) {
    const Eigen::Index p = dim(rng), q = dim(rng);
    const bool want = unif(rng) < 0.5;
    {  // (i) A > 0: X >= 0 iff C - B^T A^-1 B >= 0
      const Matrix A = random_pd(p, rng);
      const Matrix B = random_gaussian(p, q, rng);
      const Matrix C = B.transpose() * A.inverse() * B + shift(q, want);
      const bool lhs = psd(block2(A, B, C));
      const bool rhs = psd(C - B.transpose() * A.inverse() * B);
      ++rep.trials[0];
      if (lhs != rhs) ++rep.failures[0];
    }
    {  // (ii) X >= 0 iff A >= 0, col B in col A, C - B^T A^+ B >= 0
      const Eigen::Index r = 1 + static_cast<Eigen::Index>(unif(rng) * static_cast<double>(p));
      const Matrix A = detail::random_psd_rank(p, std::min(r, p), rng);
      const bool in_range = unif(rng) < 0.7;
      const Matrix B = in_range ? Matrix(A * random_gaussian(p, q, rng)) : random_gaussian(p, q, rng);
      const Matrix Ap = pinv(SymMatrix(A), tol).matrix();
      const Matrix C = B.transpose() * Ap * B + shift(q, want);
      const Matrix X = block2(A, B, C);
      const bool col_ok = (A * Ap * B - B).norm() <= 1e-8 * (1.0 + B.norm());
      const bool rhs = psd(A) && col_ok && psd(C - B.transpose() * Ap * B);
      // Off-range B with a singular A: X is never PSD; keep only clear cases.
      const bool lhs = psd(X);
      ++rep.trials[1];
      if (lhs != rhs) ++rep.failures[1];
    }
    {  // (iii) B = I: X >= 0 implies A > 0, C > 0, A >= C^-1, A^-1 <= C
      const Matrix A = random_pd(p, rng);
      const Matrix C = A.inverse() + shift(p, true);
      const Matrix I = Matrix::Identity(p, p);
      if (psd(block2(A, I, C))) {
        ++rep.trials[2];
        const bool ok = pd(A) && pd(C) && psd(A - C.inverse()) && psd(C - A.inverse());
        if (!ok) ++rep.failures[2];
      }
    }
    {  // (iv) B = I, A > 0, C > 0 and A >= C^-1 implies X >= 0
      const Matrix C = random_pd(p, rng);
      const Matrix A = C.inverse() + shift(p, true);
      const Matrix I = Matrix::Identity(p, p);
      if (pd(A) && pd(C) && (psd(A - C.inverse()) || psd(C - A.inverse()))) {
        ++rep.trials[3];
        if (!psd(block2(A, I, C))) ++rep.failures[3];
      }
    }
    {  // (v) X > 0 and X^-1 >= blkdiag(Q, 0) implies A^-1 >= Q
      const Matrix X = random_pd(p + q, rng);
      const Matrix A = X.topLeftCorner(p, p);
      const Matrix Ti = X.inverse();
      // Largest admissible Q is the Schur complement of the inverse, which equals A^-1.
      const Matrix schur = Ti.topLeftCorner(p, p) -
                           Ti.topRightCorner(p, q) * Ti.bottomRightCorner(q, q).inverse() *
                               Ti.bottomLeftCorner(q, p);
      const double c = unif(rng);
      const Matrix Q = c * schur;
      Matrix Qb = Matrix::Zero(p + q, p + q);
      Qb.topLeftCorner(p, p) = Q;
      if (psd(Ti - Qb)) {
        ++rep.trials[4];
        if (!psd(A.inverse() - Q)) ++rep.failures[4];
      }
    }
  }
  return rep;
}

}  // namespace oci
