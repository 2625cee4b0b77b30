#pragma once

// Random fusion instances with known feasibility, for property tests.

#include "oci/oci.hpp"
#include "support/oracles.hpp"

#include <random>

namespace testing_support {

using oci::Matrix;
using oci::Vector;

enum class InstanceKind {
  Bounded,    // stacked W has full column rank: feasible by construction
  Uncovered,  // an unbounded coordinate enters through H: infeasible by construction
  Partial,    // random W that may leave directions unbounded
};

struct Instance {
  oci::FusionProblem problem;
  InstanceKind kind;
};

inline Matrix gaussian(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Matrix a(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) a(i, j) = nd(rng);
  return a;
}

inline Matrix random_pd(Eigen::Index k, std::mt19937_64& rng, double ridge = 0.2) {
  const Matrix a = gaussian(k, k, rng);
  return a * a.transpose() / static_cast<double>(k) + ridge * Matrix::Identity(k, k);
}

inline int uniform_int(int lo, int hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Rows of W either select coordinates or are Gaussian combinations.
inline Matrix random_W(Eigen::Index rows, Eigen::Index m, const std::vector<Eigen::Index>& allowed,
                       std::mt19937_64& rng) {
  Matrix W = Matrix::Zero(rows, m);
  const bool selector = uniform_int(0, 1, rng) == 0 && static_cast<Eigen::Index>(allowed.size()) >= rows;
  std::vector<Eigen::Index> pool = allowed;
  std::shuffle(pool.begin(), pool.end(), rng);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (selector) {
      W(r, pool[static_cast<std::size_t>(r)]) = 1.0;
    } else {
      std::normal_distribution<double> nd;
      for (Eigen::Index c : allowed) W(r, c) = nd(rng);
    }
  }
  return W;
}

/// n <= 4, o <= 8, m <= 6, M <= 4.
inline Instance random_instance(InstanceKind kind, std::mt19937_64& rng) {
  const int n = uniform_int(1, 3, rng);
  const int o = uniform_int(n + 1, std::min(8, n + 4), rng);
  const int m = uniform_int(kind == InstanceKind::Uncovered ? 2 : 1, 6, rng);
  const int M = uniform_int(1, 4, rng);
  Matrix H = gaussian(o, n, rng);
  const Matrix R = random_pd(o, rng);
  Matrix C = gaussian(o, m, rng);

  std::vector<Eigen::Index> covered;
  const Eigen::Index hole = kind == InstanceKind::Uncovered ? uniform_int(0, m - 1, rng) : -1;
  for (Eigen::Index c = 0; c < m; ++c)
    if (c != hole) covered.push_back(c);

  std::vector<oci::ComponentBound> bounds;
  for (int b = 0; b < M; ++b) {
    const int rows = uniform_int(1, static_cast<int>(covered.size()), rng);
    bounds.emplace_back(random_W(rows, m, covered, rng), random_pd(rows, rng));
  }
  if (kind == InstanceKind::Bounded) {
    // One extra full-rank bound guarantees a bounded admissible set.
    if (oci::rank_tol(oci::stacked_W(oci::InfoStructure(m, bounds))) < m) {
      bounds.pop_back();
      bounds.emplace_back(gaussian(m, m, rng) + 2.0 * Matrix::Identity(m, m), random_pd(m, rng));
    }
  }
  if (kind == InstanceKind::Uncovered) {
    // The unbounded coordinate reaches the estimates along H a with a != 0.
    Vector a = gaussian(n, 1, rng);
    a /= a.norm();
    C.col(hole) = H * a;
  }
  return {oci::FusionProblem(H, R, C, oci::InfoStructure(m, std::move(bounds))), kind};
}

/// Example 1 layout: three scalar estimates of x_i, bounds over [x_p, x_i, x_q].
inline oci::FusionProblem example1_like(std::mt19937_64& rng) {
  Matrix R = Matrix::Zero(3, 3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int i = 0; i < 3; ++i) R(i, i) = u(rng);
  Matrix C(3, 3);
  C << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  Matrix W2 = Matrix::Zero(2, 3), W3 = Matrix::Zero(2, 3);
  W2(0, 0) = 1, W2(1, 1) = 1;
  W3(0, 1) = 1, W3(1, 2) = 1;
  std::vector<oci::ComponentBound> b;
  b.emplace_back(Matrix::Identity(3, 3), random_pd(3, rng));
  b.emplace_back(W2, random_pd(2, rng));
  b.emplace_back(W3, random_pd(2, rng));
  return oci::FusionProblem(Matrix::Ones(3, 1), R, C, oci::InfoStructure(3, std::move(b)));
}

inline std::vector<oracle::Bound> oracle_bounds(const oci::InfoStructure& info) {
  std::vector<oracle::Bound> out;
  for (const auto& b : info.bounds()) out.push_back({b.W(), b.X().matrix()});
  return out;
}

}  // namespace testing_support
