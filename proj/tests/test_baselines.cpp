#include "oci/oci.hpp"
#include "support/instances.hpp"

#include <gtest/gtest.h>

using namespace oci;
using testing_support::random_pd;

namespace {

TwoEstimateCI scalar_pair(double x1, double x2) {
  TwoEstimateCI s;
  s.X1 = Matrix::Constant(1, 1, x1);
  s.X2 = Matrix::Constant(1, 1, x2);
  s.H1 = s.H2 = Matrix::Ones(1, 1);
  return s;
}

}  // namespace

TEST(CastBasicCi, Structure) {
  TwoEstimateCI s;
  s.X1 = Matrix::Identity(2, 2);
  s.X2 = Matrix::Identity(3, 3);
  s.H1 = Matrix::Ones(2, 1);
  s.H2 = Matrix::Ones(3, 1);
  const auto p = cast_basic_ci(s, 1e-8);
  ASSERT_EQ(p.info().size(), 2);
  Matrix W1 = Matrix::Zero(2, 5), W2 = Matrix::Zero(3, 5);
  W1.leftCols(2).setIdentity();
  W2.rightCols(3).setIdentity();
  EXPECT_EQ(p.info()[0].W(), W1);
  EXPECT_EQ(p.info()[1].W(), W2);
  EXPECT_EQ(p.C(), Matrix(Matrix::Identity(5, 5)));
  EXPECT_NE(p.note().find("epsilon_r"), std::string::npos);
  EXPECT_NEAR(default_epsilon_r(s), 1e-8, 1e-20);
}

TEST(CastBasicCi, IdenticalScalarsGiveNoImprovement) {
  const auto sol = solve_kahan_oci(cast_basic_ci(scalar_pair(1.0, 1.0), 1e-6));
  ASSERT_TRUE(sol.ok()) << sol.diagnostics;
  EXPECT_NEAR(sol.B(0, 0), 1.0, 1e-5);
}

TEST(CastBasicCi, DominantBoundTakesAllWeight) {
  const auto sol = solve_kahan_oci(cast_basic_ci(scalar_pair(1.0, 4.0), 1e-8));
  ASSERT_TRUE(sol.ok()) << sol.diagnostics;
  EXPECT_NEAR(sol.B(0, 0), 1.0, 1e-5);
  EXPECT_GT(sol.omega[0], 1.0 - 1e-4);
}

TEST(CastBasicCi, MatchesClassicalCiOnMatrices) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    TwoEstimateCI s;
    s.X1 = random_pd(2, rng);
    s.X2 = random_pd(2, rng);
    s.H1 = s.H2 = Matrix::Identity(2, 2);
    const auto sol = solve_kahan_oci(cast_basic_ci(s, 1e-8));
    ASSERT_TRUE(sol.ok()) << sol.diagnostics;
    const double grid = oracle::ci_grid_min_trace(s.X1, s.X2, 1e-4);
    EXPECT_LE(std::abs(sol.B.trace() - grid) / grid, 1e-3);
    const double w = sol.omega[0];
    EXPECT_LE(std::abs(classical_ci_bound(s.X1, s.X2, w).trace() - sol.B.trace()) / grid, 1e-3);
  }
}

TEST(CastSci, StructureAndValidation) {
  TwoEstimateCI s = scalar_pair(1.0, 2.0);
  EXPECT_THROW(cast_sci(s), Error);
  s.Xind1 = Matrix::Constant(1, 1, 0.3);
  s.Xind2 = Matrix::Constant(1, 1, 0.4);
  const auto p = cast_sci(s);
  EXPECT_DOUBLE_EQ(p.R().matrix()(0, 0), 0.3);
  EXPECT_DOUBLE_EQ(p.R().matrix()(1, 1), 0.4);
  EXPECT_DOUBLE_EQ(p.R().matrix()(0, 1), 0.0);
  TwoEstimateCI bad = s;
  bad.H2 = Matrix::Ones(1, 2);
  EXPECT_THROW(cast_sci(bad), Error);
}

TEST(CastSci, VanishingCorrelatedPartRecoversLeastSquares) {
  TwoEstimateCI s = scalar_pair(1e-9, 1e-9);
  s.Xind1 = Matrix::Constant(1, 1, 1.0);
  s.Xind2 = Matrix::Constant(1, 1, 3.0);
  const auto sol = solve_kahan_oci(cast_sci(s));
  ASSERT_TRUE(sol.ok()) << sol.diagnostics;
  EXPECT_NEAR(sol.B(0, 0), 0.75, 1e-6);
  EXPECT_NEAR(sol.K(0, 0), 0.75, 1e-6);
}

TEST(SciRestriction, AutocorrelationOnlyBounds) {
  std::mt19937_64 rng(2);
  const auto p = testing_support::example1_like(rng);
  const auto q = sci_restriction(p);
  EXPECT_EQ(q.info().size(), 7);
  for (const auto& b : q.info().bounds()) EXPECT_EQ(b.rows(), 1);
  Matrix W(1, 2);
  W << 1, 1;
  const FusionProblem bad(Matrix::Ones(2, 1), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                          InfoStructure(2, {ComponentBound(W, Matrix::Ones(1, 1))}));
  EXPECT_THROW(sci_restriction(bad), Error);
}

TEST(SciRestriction, OciNeverWorseThanSci) {
  std::mt19937_64 rng(3);
  const Tolerances tol;
  for (int t = 0; t < 15; ++t) {
    const auto p = testing_support::example1_like(rng);
    const auto oci_sol = solve_kahan_oci(p);
    const auto sci_sol = solve_kahan_oci(sci_restriction(p));
    ASSERT_TRUE(oci_sol.ok() && sci_sol.ok());
    EXPECT_LE(oci_sol.B.trace(), sci_sol.B.trace() + tol.tol_check);
  }
}
