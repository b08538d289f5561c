#include <gtest/gtest.h>

#include "sympick/corona.hpp"
#include "sympick/hermitian.hpp"
#include "sympick/random.hpp"

using namespace sympick;

namespace {

NodeSet random_nodes(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::vector<GPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(symmetrize(random_disk_point(rng, 0.8), random_disk_point(rng, 0.8)));
  return NodeSet(std::move(pts));
}

Matrix row(Complex a, Complex b) {
  Matrix m(1, 2);
  m << a, b;
  return m;
}

CoronaProblem constant_problem() {
  CoronaProblem p;
  p.nodes = random_nodes(1, 3);
  p.phi_samples.assign(3, row(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)));
  p.delta = 1.0;
  return p;
}

CoronaProblem phi0_problem(std::uint64_t seed) {
  CoronaProblem p;
  p.nodes = random_nodes(seed, 3);
  for (const GPoint& x : p.nodes.points()) p.phi_samples.push_back(row(phi(0.0, x), 1.0) / std::sqrt(2.0));
  p.delta = 0.5;
  return p;
}

CoronaOptions fast() {
  CoronaOptions o;
  o.contractivity_samples = 2000;
  return o;
}

}  // namespace

TEST(AssembleCorona, ConstantRowGivesZero) {
  EXPECT_LE(assemble_corona_target(constant_problem()).j.norm(), 1e-15);
}

TEST(AssembleCorona, RankOneTarget) {
  const CoronaProblem p = phi0_problem(2);
  const Matrix j = assemble_corona_target(p).j;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      EXPECT_NEAR(std::abs(j(i, k) - phi(0.0, p.nodes[i]) * std::conj(phi(0.0, p.nodes[k])) / 2.0), 0.0, 1e-15);
  EXPECT_GE(min_eigenvalue(j), -1e-15);
}

TEST(AssembleCorona, LargeDeltaNegativeDiagonal) {
  CoronaProblem p = constant_problem();
  p.delta = 1.5;
  const Matrix j = assemble_corona_target(p).j;
  for (int i = 0; i < 3; ++i) EXPECT_LT(j(i, i).real(), 0.0);
  EXPECT_EQ(solve_corona(p, AlphaGrid::standard(), fast()).report.status, SolveStatus::InfeasibleCertified);
}

TEST(SolveCorona, ConstantCase) {
  const CoronaProblem p = constant_problem();
  const CoronaSolution s = solve_corona(p, AlphaGrid::standard(), fast());
  ASSERT_EQ(s.report.status, SolveStatus::Feasible);
  ASSERT_TRUE(s.psi.has_value());
  EXPECT_LE(s.node_residual, 1e-7);
  EXPECT_LE(s.sampled_norm, 1.0 + 1e-8);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(std::abs((p.phi_samples[0] * transfer_eval(*s.psi, p.nodes[i]))(0, 0) - 1.0), 0.0, 1e-7);
}

TEST(SolveCorona, PlantedPhi0) {
  const CoronaProblem p = phi0_problem(3);
  const CoronaSolution s = solve_corona(p, AlphaGrid::standard(), fast());
  ASSERT_EQ(s.report.status, SolveStatus::Feasible);
  for (int i = 0; i < 3; ++i) {
    const Matrix v = p.phi_samples[static_cast<std::size_t>(i)] * transfer_eval(*s.psi, p.nodes[i]);
    EXPECT_NEAR(std::abs(v(0, 0) - std::sqrt(0.5)), 0.0, 1e-7);
  }
  ASSERT_TRUE(s.left_inverse.has_value());
  for (int i = 0; i < 3; ++i) {
    const Matrix v = p.phi_samples[static_cast<std::size_t>(i)] * transfer_eval(*s.left_inverse, p.nodes[i]);
    EXPECT_NEAR(std::abs(v(0, 0) - 1.0), 0.0, 1e-7);
  }
  EXPECT_NEAR(s.bound_sqrt, std::sqrt(2.0), 1e-15);
}

TEST(SolveCorona, VanishingPhiInfeasible) {
  CoronaProblem p;
  p.nodes = NodeSet({symmetrize(0.05, -0.02), symmetrize(0.5, 0.4), symmetrize({0, 0.6}, {0, 0.3})});
  for (const GPoint& x : p.nodes.points()) p.phi_samples.push_back(Matrix::Constant(1, 1, phi(0.0, x)));
  p.delta = 0.1;
  ASSERT_GT(p.delta, std::norm(phi(0.0, p.nodes[0])));
  EXPECT_NE(solve_corona(p, AlphaGrid::standard(), fast()).report.status, SolveStatus::Feasible);
}

TEST(SolveCorona, ExplicitTheta) {
  CoronaProblem p = constant_problem();
  p.theta_samples = std::vector<Matrix>(3, Matrix::Constant(1, 1, 0.5));
  const CoronaSolution s = solve_corona(p, AlphaGrid::standard(), fast());
  ASSERT_EQ(s.report.status, SolveStatus::Feasible);
  EXPECT_LE(s.node_residual, 1e-7);
  EXPECT_FALSE(s.left_inverse.has_value());
}

TEST(LeftInverse, ConstantResidualZero) {
  const CoronaProblem p = constant_problem();
  const CoronaSolution s = solve_corona(p, AlphaGrid::standard(), fast());
  const CoronaEvaluator ev = [&](const GPoint&) { return std::make_pair(p.phi_samples[0], Matrix::Ones(1, 1).eval()); };
  const LeftInverseReport r = verify_left_inverse(s.psi, p, 200, 2, ev);
  EXPECT_FALSE(r.skipped);
  EXPECT_LE(r.node_residual, 1e-7);
  EXPECT_GE(r.sample_residual, 0.0);
  EXPECT_LE(r.sample_residual, 1e-6);
}

TEST(LeftInverse, PlantedNodeResidual) {
  const CoronaProblem p = phi0_problem(4);
  const CoronaSolution s = solve_corona(p, AlphaGrid::standard(), fast());
  EXPECT_LE(verify_left_inverse(s.psi, p, 0).node_residual, 1e-7);
}

TEST(LeftInverse, SkippedWithoutPsi) {
  CoronaProblem p = constant_problem();
  p.delta = 2.0;
  const CoronaSolution s = solve_corona(p, AlphaGrid::standard(), fast());
  EXPECT_TRUE(verify_left_inverse(s.psi, p, 10).skipped);
}

TEST(CoronaProblem, Validation) {
  CoronaProblem p = constant_problem();
  p.delta = 0.0;
  EXPECT_THROW(p.validate(), InputError);
  p = constant_problem();
  p.phi_samples.pop_back();
  EXPECT_THROW(p.validate(), InputError);
  p = constant_problem();
  p.phi_samples.assign(3, Matrix::Ones(9, 1));
  EXPECT_THROW(p.validate(), InputError);
}
