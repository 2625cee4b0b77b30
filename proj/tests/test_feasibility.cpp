#include "oci/feasibility.hpp"
#include "support/instances.hpp"

#include <gtest/gtest.h>

using namespace oci;
using testing_support::InstanceKind;
using testing_support::random_instance;

namespace {

Matrix row(double a, double b) {
  Matrix m(1, 2);
  m << a, b;
  return m;
}

InfoStructure single(const Matrix& W) {
  return InfoStructure(W.cols(), {ComponentBound(W, Matrix::Identity(W.rows(), W.rows()))});
}

/// Condition matrix straight from its definition.
Matrix direct_condition(const FusionProblem& p) {
  const Matrix Ri = p.R().matrix().inverse();
  const Matrix W = stacked_W(p.info());
  const Matrix Z = W.transpose() * W + p.C().transpose() * Ri * p.C();
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Z);
  return p.H().transpose() * Ri * p.H() -
         p.H().transpose() * Ri * p.C() * cod.pseudoInverse() * p.C().transpose() * Ri * p.H();
}

}  // namespace

TEST(PBounded, Examples) {
  EXPECT_TRUE(p_bounded(single(Matrix::Identity(3, 3))));
  EXPECT_FALSE(p_bounded(single(row(1, 0))));
  std::mt19937_64 rng(1);
  EXPECT_TRUE(p_bounded(testing_support::example1_like(rng).info()));
}

TEST(CpcBounded, Examples) {
  EXPECT_TRUE(cpc_bounded(single(row(1, 0)), Matrix::Zero(2, 2)));
  EXPECT_FALSE(cpc_bounded(single(row(1, 0)), Matrix::Identity(2, 2)));
  EXPECT_TRUE(cpc_bounded(single(row(1, 0)), row(2, 0)));
}

TEST(OciFeasible, HandComputedScalarCondition) {
  const FusionProblem p(Matrix::Ones(2, 1), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                        single(Matrix::Identity(2, 2)));
  // 2 - [1 1] (2I)^-1 [1 1]^T = 1.
  EXPECT_NEAR(condition_matrix(p)(0, 0), 1.0, 1e-12);
  EXPECT_TRUE(oci_feasible(p));
}

TEST(OciFeasible, ZeroCorrelationAlwaysFeasible) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const auto inst = random_instance(InstanceKind::Partial, rng);
    const auto& q = inst.problem;
    const FusionProblem p(q.H(), q.R().matrix(), Matrix::Zero(q.o(), q.m()), q.info());
    EXPECT_TRUE(oci_feasible(p));
  }
}

TEST(OciFeasible, Example2Fixture) {
  std::vector<ComponentBound> b;
  b.emplace_back(Matrix::Identity(2, 2), Matrix::Identity(2, 2));
  b.emplace_back(row(1, 0), Matrix::Ones(1, 1));
  b.emplace_back(row(2, -1), Matrix::Ones(1, 1));
  const FusionProblem p(Matrix::Ones(2, 1), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                        InfoStructure(2, std::move(b)));
  EXPECT_TRUE(oci_feasible(p));
  EXPECT_TRUE(analyze(p).sufficient_feasible);
}

TEST(Analyze, FullyBoundedExample1) {
  std::mt19937_64 rng(3);
  const auto r = analyze(testing_support::example1_like(rng));
  EXPECT_TRUE(r.p_bounded);
  EXPECT_TRUE(r.cpc_bounded);
  EXPECT_TRUE(r.sufficient_feasible);
  EXPECT_TRUE(r.oci_feasible);
  EXPECT_EQ(r.reason, FeasibilityReason::Feasible);
}

TEST(Analyze, UnboundedCoordinateThroughIdentity) {
  const FusionProblem p(Matrix::Identity(2, 2), Matrix::Identity(2, 2), Matrix::Identity(2, 2),
                        single(row(1, 0)));
  const auto r = analyze(p);
  EXPECT_FALSE(r.p_bounded);
  EXPECT_FALSE(r.cpc_bounded);
  EXPECT_FALSE(r.sufficient_feasible);
  EXPECT_FALSE(r.oci_feasible);
  EXPECT_EQ(r.reason, FeasibilityReason::ConditionFails);
}

TEST(Analyze, RowSpaceOfCInsideW) {
  Matrix C = Matrix::Zero(2, 2);
  C(0, 0) = 1;
  const FusionProblem p(Matrix::Identity(2, 2), Matrix::Identity(2, 2), C, single(row(1, 0)));
  const auto r = analyze(p);
  EXPECT_FALSE(r.p_bounded);
  EXPECT_TRUE(r.cpc_bounded);
  EXPECT_TRUE(r.sufficient_feasible);
  EXPECT_TRUE(r.oci_feasible);
}

TEST(Analyze, RankDeficientHHasOwnReason) {
  Matrix H(2, 2);
  H << 1, 2, 2, 4;
  const FusionProblem p(H, Matrix::Identity(2, 2), Matrix::Zero(2, 1), single(Matrix::Ones(1, 1)));
  const auto r = analyze(p);
  EXPECT_FALSE(r.h_full_rank);
  EXPECT_FALSE(r.oci_feasible);
  EXPECT_EQ(r.reason, FeasibilityReason::HRankDeficient);
}

TEST(Analyze, ImplicationChainOnRandomInstances) {
  std::mt19937_64 rng(4);
  const InstanceKind kinds[] = {InstanceKind::Bounded, InstanceKind::Uncovered, InstanceKind::Partial};
  for (int t = 0; t < 300; ++t) {
    const auto inst = random_instance(kinds[t % 3], rng);
    const auto r = analyze(inst.problem);
    if (r.p_bounded) { EXPECT_TRUE(r.cpc_bounded) << t; }
    if (r.cpc_bounded && r.h_full_rank) { EXPECT_TRUE(r.sufficient_feasible) << t; }
    if (r.sufficient_feasible) { EXPECT_TRUE(r.oci_feasible) << t; }
    if (inst.kind == InstanceKind::Bounded) { EXPECT_TRUE(r.oci_feasible) << t; }
    if (inst.kind == InstanceKind::Uncovered) { EXPECT_FALSE(r.oci_feasible) << t; }
  }
}

TEST(Analyze, ScaleInvarianceInR) {
  std::mt19937_64 rng(5);
  const InstanceKind kinds[] = {InstanceKind::Bounded, InstanceKind::Uncovered, InstanceKind::Partial};
  for (int t = 0; t < 90; ++t) {
    const auto p = random_instance(kinds[t % 3], rng).problem;
    const auto a = analyze(p);
    for (double s : {1e-3, 0.5, 7.0, 1e3}) {
      const FusionProblem q(p.H(), s * p.R().matrix(), p.C(), p.info());
      const auto b = analyze(q);
      EXPECT_EQ(a.p_bounded, b.p_bounded);
      EXPECT_EQ(a.cpc_bounded, b.cpc_bounded);
      EXPECT_EQ(a.sufficient_feasible, b.sufficient_feasible);
      EXPECT_EQ(a.oci_feasible, b.oci_feasible);
    }
  }
}

TEST(ConditionMatrix, MatchesDefinitionOnWellConditionedInstances) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_instance(t % 2 ? InstanceKind::Bounded : InstanceKind::Partial, rng).problem;
    const Matrix direct = direct_condition(p);
    const Matrix factored = condition_matrix(p);
    EXPECT_LE((direct - factored).norm(), 1e-7 * std::max(1.0, direct.norm())) << t;
  }
}

TEST(Analyze, BorderlineFlagOnNearlyDependentH) {
  Matrix H(2, 2);
  H << 1, 1, 0, 3e-9;
  const FusionProblem p(H, Matrix::Identity(2, 2), Matrix::Zero(2, 1), single(Matrix::Ones(1, 1)));
  EXPECT_TRUE(analyze(p).borderline);
}
