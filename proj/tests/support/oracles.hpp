#pragma once

// Reference computations written directly from the defining formulas, with no
// library code on the path beyond plain Eigen.

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;

/// (H^T (R + C X C^T)^-1 H)^-1: the exact fused bound when the whole P is bounded by X.
inline Matrix single_bound_B(const Matrix& H, const Matrix& R, const Matrix& C, const Matrix& X) {
  const Matrix S = R + C * X * C.transpose();
  return (H.transpose() * S.inverse() * H).inverse();
}

/// Classical two-estimate CI over a weight grid, returning the best trace.
inline double ci_grid_min_trace(const Matrix& X1, const Matrix& X2, double step) {
  double best = std::numeric_limits<double>::infinity();
  const Matrix I1 = X1.inverse(), I2 = X2.inverse();
  const int n = static_cast<int>(1.0 / step + 0.5);
  for (int k = 0; k <= n; ++k) {
    const double w = static_cast<double>(k) / n;
    best = std::min(best, (w * I1 + (1.0 - w) * I2).inverse().trace());
  }
  return best;
}

struct Bound {
  Matrix W, X;
};

/// Y(omega) = sum omega_b W_b^T X_b^-1 W_b.
inline Matrix kahan_Y(const std::vector<Bound>& bounds, const std::vector<double>& w) {
  const auto m = bounds.front().W.cols();
  Matrix Y = Matrix::Zero(m, m);
  for (std::size_t b = 0; b < bounds.size(); ++b)
    Y += w[b] * bounds[b].W.transpose() * bounds[b].X.inverse() * bounds[b].W;
  return Y;
}

/// Fused bound at a weight with invertible Y: (H^T (R + C Y^-1 C^T)^-1 H)^-1.
inline Matrix kahan_B(const Matrix& H, const Matrix& R, const Matrix& C, const Matrix& Y) {
  return single_bound_B(H, R, C, Y.inverse());
}

/// Best trace over a simplex grid (M <= 3), skipping weights with singular Y.
inline double kahan_grid_min_trace(const Matrix& H, const Matrix& R, const Matrix& C,
                                   const std::vector<Bound>& bounds, int divisions) {
  double best = std::numeric_limits<double>::infinity();
  const auto M = bounds.size();
  const auto eval = [&](const std::vector<double>& w) {
    const Matrix Y = kahan_Y(bounds, w);
    Eigen::SelfAdjointEigenSolver<Matrix> es(Y);
    if (es.eigenvalues().minCoeff() <= 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff())) return;
    best = std::min(best, kahan_B(H, R, C, Y).trace());
  };
  if (M == 1) {
    eval({1.0});
  } else if (M == 2) {
    for (int a = 0; a <= divisions; ++a) {
      const double w = static_cast<double>(a) / divisions;
      eval({w, 1.0 - w});
    }
  } else {
    for (int a = 0; a <= divisions; ++a)
      for (int b = 0; a + b <= divisions; ++b)
        eval({static_cast<double>(a) / divisions, static_cast<double>(b) / divisions,
              static_cast<double>(divisions - a - b) / divisions});
  }
  return best;
}

/// max_b lambda_max(W_b P W_b^T - X_b).
inline double admissibility_violation(const std::vector<Bound>& bounds, const Matrix& P) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& b : bounds) {
    const Matrix D = b.W * P * b.W.transpose() - b.X;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (D + D.transpose()));
    worst = std::max(worst, es.eigenvalues().maxCoeff());
  }
  return worst;
}

inline double min_eig(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
  return es.eigenvalues().minCoeff();
}

inline double max_eig(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
  return es.eigenvalues().maxCoeff();
}

/// True when every column of H lies in range(C). Then any unbiased gain K' with
/// K' C = A K C is pinned to K, so rebuilding from (K, B) cannot tighten B.
inline bool range_contains(const Matrix& C, const Matrix& H) {
  const Matrix fit = C * C.completeOrthogonalDecomposition().solve(H);
  return (H - fit).norm() <= 1e-8 * std::max(1.0, H.norm());
}

}  // namespace oracle
